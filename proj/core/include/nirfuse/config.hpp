#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "nirfuse/eval.hpp"
#include "nirfuse/fusion.hpp"
#include "nirfuse/transforms.hpp"

namespace nirfuse {

/// Batch-run configuration. Defaults are the production parameters
/// (BFParams/WLSParams defaults, the five standard transforms, ratio
/// threshold 1.5, SIFT bin 8 / step 4).
struct RunConfig {
    std::filesystem::path dataset_root;
    std::filesystem::path output_dir = "nirfuse-out";
    std::filesystem::path manifest; // optional pair list override

    std::vector<FusionTag> methods = {FusionTag::BfwlsAvg, FusionTag::BfwlsMax, FusionTag::SwapBf,
                                      FusionTag::SwapWls};
    std::vector<TransformKind> transforms = default_transforms();
    BFParams bf;
    WLSParams wls;
    EvalOptions eval;
    MaxVariant max_variant = MaxVariant::Magnitude;

    int threads = 1;
    bool emit_images = false;
    int max_pairs = 0; // 0 = no limit

    FusionMethod method(FusionTag tag) const { return {tag, bf, wls, max_variant}; }
    std::vector<FusionMethod> method_list() const;
};

/// Ordered key=value pairs, e.g. from a config file or CLI overrides.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Reads a flat key=value file ('#' comments, lists comma-separated).
/// Throws IoError when unreadable, ConfigError on malformed lines.
KeyValues read_key_value_file(const std::filesystem::path& path);

/// Applies pairs in order onto cfg. Unknown keys raise ConfigError with a
/// nearest-key suggestion; bad values raise ConfigError naming the expected
/// type.
void apply_key_values(RunConfig& cfg, const KeyValues& kv);

/// defaults <- file (optional) <- overrides, later wins.
RunConfig parse_config(const std::filesystem::path& file, const KeyValues& overrides);

/// FNV-1a hash of every result-affecting field (filter/eval parameters,
/// methods, transforms, max_variant). Paths, thread counts and output
/// options do not participate.
std::string config_hash(const RunConfig& cfg);

/// All recognized config keys.
std::vector<std::string> config_keys();

} // namespace nirfuse
