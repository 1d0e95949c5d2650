#include "nirfuse/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "nirfuse/errors.hpp"

namespace nirfuse {

namespace {

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool supported_extension(const std::filesystem::path& p) {
    const std::string ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".tif" || ext == ".tiff";
}

} // namespace

std::vector<PairEntry> discover_pairs(const std::filesystem::path& dataset_root,
                                      std::vector<std::string>* warnings) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dataset_root)) {
        throw DatasetError("dataset root '" + dataset_root.string() + "' is not a directory");
    }

    // id -> paths seen so far
    std::map<std::string, PairEntry> found;
    long files_scanned = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dataset_root)) {
        if (!entry.is_regular_file()) continue;
        ++files_scanned;
        const fs::path& p = entry.path();
        if (!supported_extension(p)) continue;
        const std::string stem = p.stem().string();
        bool is_rgb = false;
        if (stem.size() > 4 && stem.ends_with("_rgb")) {
            is_rgb = true;
        } else if (!(stem.size() > 4 && stem.ends_with("_nir"))) {
            continue;
        }
        const std::string base = stem.substr(0, stem.size() - 4);
        const std::string rel_dir = fs::relative(p.parent_path(), dataset_root).generic_string();
        const std::string id = (rel_dir.empty() || rel_dir == ".") ? base : rel_dir + "/" + base;
        PairEntry& pe = found[id];
        pe.id = id;
        if (is_rgb) {
            pe.rgb = p;
        } else {
            pe.nir = p;
        }
    }

    std::vector<PairEntry> pairs;
    for (auto& [id, pe] : found) {
        if (pe.rgb.empty() || pe.nir.empty()) {
            if (warnings) {
                warnings->push_back("unpaired image for id '" + id + "' (missing " +
                                    (pe.rgb.empty() ? "_rgb" : "_nir") + " file)");
            }
            continue;
        }
        pairs.push_back(std::move(pe));
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PairEntry& a, const PairEntry& b) { return a.id < b.id; });

    if (pairs.empty()) {
        throw DatasetError("no `*_rgb` / `*_nir` pairs under '" + dataset_root.string() +
                           "' (scanned " + std::to_string(files_scanned) +
                           " files; expected e.g. country/0001_rgb.png + country/0001_nir.png)");
    }
    return pairs;
}

std::vector<PairEntry> read_manifest(const std::filesystem::path& manifest) {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest '" + manifest.string() + "'");
    const std::filesystem::path base = manifest.parent_path();

    auto resolve = [&base](const std::string& s) {
        std::filesystem::path p(s);
        return p.is_absolute() ? p : base / p;
    };

    std::vector<PairEntry> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = true;
        for (char c : line) {
            blank = blank && std::isspace(static_cast<unsigned char>(c));
        }
        if (blank) continue;
        std::stringstream ss(line);
        std::string id, rgb, nir;
        if (!std::getline(ss, id, ',') || !std::getline(ss, rgb, ',') || !std::getline(ss, nir)) {
            throw DatasetError(manifest.string() + ":" + std::to_string(lineno) +
                               ": expected 'id,rgb_path,nir_path'");
        }
        auto strip = [](std::string& s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        };
        strip(id);
        strip(rgb);
        strip(nir);
        pairs.push_back({id, resolve(rgb), resolve(nir)});
    }
    if (pairs.empty()) {
        throw DatasetError("manifest '" + manifest.string() + "' lists no pairs");
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const PairEntry& a, const PairEntry& b) { return a.id < b.id; });
    return pairs;
}

} // namespace nirfuse
