#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace nirfuse {

struct PairEntry {
    std::string id; // e.g. "country/0001"
    std::filesystem::path rgb;
    std::filesystem::path nir;
};

/// Scans dataset_root recursively for `<stem>_rgb.<ext>` / `<stem>_nir.<ext>`
/// pairs (png/jpg/jpeg/tif/tiff; extensions may differ within a pair).
/// Pairs are sorted by id; unpaired files are reported through `warnings`.
/// Throws DatasetError when the scan finds no pairs.
std::vector<PairEntry> discover_pairs(const std::filesystem::path& dataset_root,
                                      std::vector<std::string>* warnings = nullptr);

/// Manifest override: one `id,rgb_path,nir_path` line per pair (# comments).
/// Relative paths resolve against the manifest's directory.
std::vector<PairEntry> read_manifest(const std::filesystem::path& manifest);

} // namespace nirfuse
