#include "nirfuse/fusion.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nirfuse/errors.hpp"

namespace nirfuse {

std::string to_string(FusionTag tag) {
    switch (tag) {
        case FusionTag::BfwlsAvg: return "bfwls-avg";
        case FusionTag::BfwlsMax: return "bfwls-max";
        case FusionTag::SwapBf: return "swap-bf";
        case FusionTag::SwapWls: return "swap-wls";
    }
    return "?";
}

FusionTag fusion_tag_from_string(const std::string& s) {
    std::string t;
    for (char c : s) t += c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "bfwls-avg") return FusionTag::BfwlsAvg;
    if (t == "bfwls-max") return FusionTag::BfwlsMax;
    if (t == "swap-bf") return FusionTag::SwapBf;
    if (t == "swap-wls") return FusionTag::SwapWls;
    throw ConfigError("unknown fusion method '" + s +
                      "' (expected bfwls-avg, bfwls-max, swap-bf or swap-wls)");
}

Plane fuse_details_avg(const Plane& d_wls, const Plane& d_bf) {
    if (!d_wls.same_size(d_bf)) throw ShapeError("fuse_details_avg: dimension mismatch");
    Plane out(d_wls.width, d_wls.height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.data[i] = 0.5 * (d_wls.data[i] + d_bf.data[i]);
    }
    return out;
}

Plane fuse_details_max(const Plane& d_wls, const Plane& d_bf, MaxVariant variant) {
    if (!d_wls.same_size(d_bf)) throw ShapeError("fuse_details_max: dimension mismatch");
    Plane out(d_wls.width, d_wls.height);
    if (variant == MaxVariant::Signed) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            out.data[i] = std::max(d_wls.data[i], d_bf.data[i]);
        }
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double a = d_wls.data[i];
            const double b = d_bf.data[i];
            out.data[i] = std::abs(a) >= std::abs(b) ? a : b;
        }
    }
    return out;
}

namespace {

void check_pair(const ColorImage& rgb, const Plane& nir) {
    if (!rgb.r.same_size(nir)) {
        throw ShapeError("dimension mismatch between RGB and NIR inputs");
    }
}

FuseResult recombine(const Plane& base, const Plane& detail, const LumaChroma& lc) {
    FuseResult res;
    Plane y_new(base.width, base.height);
    long clamped = 0;
    for (std::size_t i = 0; i < y_new.size(); ++i) {
        const double v = base.data[i] + detail.data[i];
        const double c = clamp01(v);
        clamped += c != v;
        y_new.data[i] = c;
    }
    res.clamped_pixels = clamped;
    res.image = ycbcr_to_rgb({std::move(y_new), lc.cb, lc.cr});
    return res;
}

} // namespace

FuseResult bfwls_fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method) {
    check_pair(rgb, nir);
    if (method.tag != FusionTag::BfwlsAvg && method.tag != FusionTag::BfwlsMax) {
        throw ConfigError("bfwls_fuse requires tag bfwls-avg or bfwls-max");
    }
    const FilterKind bf_kind =
        method.use_direct_bf ? FilterKind::BilateralDirect : FilterKind::BilateralFast;
    const LumaChroma lc = rgb_to_ycbcr(rgb);
    const LayerPair nir_wls = decompose(nir, FilterKind::Wls, method.bf, method.wls);
    const LayerPair nir_bf = decompose(nir, bf_kind, method.bf, method.wls);
    const Plane fused_detail = method.tag == FusionTag::BfwlsAvg
                                   ? fuse_details_avg(nir_wls.detail, nir_bf.detail)
                                   : fuse_details_max(nir_wls.detail, nir_bf.detail, method.max_variant);
    const Plane rgb_base = wls_smooth(lc.y, method.wls);
    return recombine(rgb_base, fused_detail, lc);
}

FuseResult detail_swap_fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method) {
    check_pair(rgb, nir);
    if (method.tag != FusionTag::SwapBf && method.tag != FusionTag::SwapWls) {
        throw ConfigError("detail_swap_fuse requires tag swap-bf or swap-wls");
    }
    const FilterKind kind = method.tag == FusionTag::SwapWls ? FilterKind::Wls
                            : method.use_direct_bf          ? FilterKind::BilateralDirect
                                                            : FilterKind::BilateralFast;
    const LumaChroma lc = rgb_to_ycbcr(rgb);
    const LayerPair nir_layers = decompose(nir, kind, method.bf, method.wls);
    const LayerPair y_layers = decompose(lc.y, kind, method.bf, method.wls);
    return recombine(y_layers.base, nir_layers.detail, lc);
}

FuseResult fuse(const ColorImage& rgb, const Plane& nir, const FusionMethod& method) {
    switch (method.tag) {
        case FusionTag::BfwlsAvg:
        case FusionTag::BfwlsMax:
            return bfwls_fuse(rgb, nir, method);
        case FusionTag::SwapBf:
        case FusionTag::SwapWls:
            return detail_swap_fuse(rgb, nir, method);
    }
    throw ConfigError("unknown fusion tag");
}

} // namespace nirfuse
