#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nirfuse/fusion.hpp"
#include "nirfuse/matching.hpp"
#include "nirfuse/transforms.hpp"

namespace nirfuse {

struct EvalOptions {
    int bin_size = 8;
    int step = 4;
    double match_threshold = 1.5;
};

/// One result row: the RGB baseline (method "rgb") or one fusion method.
struct EvalRow {
    std::string image_id;
    std::string method;
    std::vector<long> counts;              // per transform, configured order
    std::optional<double> rel_change;      // percent; empty when the baseline has no matches
    double psnr_db = 0.0;
    double mse_value = 0.0;
    double fuse_time_sec = 0.0;            // wall time of the fusion call only
    long clamped_pixels = 0;
    std::string error;                     // non-empty: the method failed on this image
};

/// Ratio-test match counts of `img` against each transformed copy of
/// itself. Features are dense SIFT on the luminance plane; ROT45 drops
/// descriptors whose support touches the zero-fill border.
std::vector<long> count_matches(const ColorImage& img, const std::vector<TransformKind>& transforms,
                                const EvalOptions& opts = {});

/// 100 * (sum(fused) - sum(rgb)) / sum(rgb); empty when sum(rgb) == 0.
std::optional<double> relative_change(const std::vector<long>& fused_counts,
                                      const std::vector<long>& rgb_counts);

/// Runs the full per-pair protocol: a baseline row plus one row per method
/// (fusion timed, match counts, PSNR/MSE against the original RGB). A
/// failing method yields an error row, not an aborted run.
std::vector<EvalRow> evaluate_pair(const ColorImage& rgb, const Plane& nir,
                                   const std::vector<FusionMethod>& methods,
                                   const std::vector<TransformKind>& transforms,
                                   const EvalOptions& opts = {},
                                   const std::string& image_id = {});

} // namespace nirfuse
