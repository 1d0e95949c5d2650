#pragma once

#include <string>

#include "nirfuse/edge_filters.hpp"
#include "nirfuse/image.hpp"

namespace nirfuse {

enum class FusionTag { BfwlsAvg, BfwlsMax, SwapBf, SwapWls };

/// How fuse_details_max picks between the two detail values.
enum class MaxVariant {
    Magnitude, // larger |value| wins, sign preserved (default reading)
    Signed     // plain per-pixel max
};

struct FusionMethod {
    FusionTag tag = FusionTag::BfwlsAvg;
    BFParams bf;
    WLSParams wls;
    MaxVariant max_variant = MaxVariant::Magnitude;
    // Production runs use the fast grid filter; tests may substitute the
    // direct filter to compose exact oracles.
    bool use_direct_bf = false;
};

/// Canonical tag spellings: bfwls-avg, bfwls-max, swap-bf, swap-wls.
std::string to_string(FusionTag tag);
FusionTag fusion_tag_from_string(const std::string& s);

/// Per-pixel arithmetic mean of two detail grids.
Plane fuse_details_avg(const Plane& d_wls, const Plane& d_bf);

/// Per-pixel maximum of two detail grids; see MaxVariant.
Plane fuse_details_max(const Plane& d_wls, const Plane& d_bf,
                       MaxVariant variant = MaxVariant::Magnitude);

struct FuseResult {
    ColorImage image;
    long clamped_pixels = 0; // luminance samples clipped before recombination
};

/// BFWLS fusion: the NIR plane is decomposed with WLS and fast-BF, the two
/// detail layers are combined (avg or max per tag), and the result is added
/// to the WLS base of the RGB luminance. The NIR base layer is discarded;
/// chrominance passes through untouched.
FuseResult bfwls_fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method);

/// Detail-swap baseline: one filter (fast-BF or WLS per tag) supplies both
/// the RGB luminance base and the NIR detail.
FuseResult detail_swap_fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method);

/// Dispatches on method.tag.
FuseResult fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method);

} // namespace nirfuse
