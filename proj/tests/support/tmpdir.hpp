#pragma once

#include <filesystem>
#include <string>

namespace synth {

/// Scratch directory under the test working directory, wiped on entry and
/// exit. Give each test site a unique name so parallel ctest runs don't
/// collide.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name) {
        path = std::filesystem::current_path() / ("scratch_" + name);
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& leaf) const { return path / leaf; }
};

} // namespace synth
