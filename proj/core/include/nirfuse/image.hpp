#pragma once

#include <cstddef>
#include <vector>

namespace nirfuse {

// BT.601 luminance weights, shared by rgb_to_ycbcr and grayscale reduction in
// the raster loaders.
inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

/// Row-major single-channel grid. Image-valued planes keep intensities in
/// [0,1] (each producer clamps); detail layers reuse the container with
/// signed values.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Plane() = default;
    Plane(int w, int h, double fill = 0.0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    double operator()(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    double& operator()(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    std::size_t size() const { return data.size(); }
    bool same_size(const Plane& o) const { return width == o.width && height == o.height; }
};

struct ColorImage {
    Plane r, g, b;

    int width() const { return r.width; }
    int height() const { return r.height; }
    bool same_size(const ColorImage& o) const { return r.same_size(o.r); }
};

/// Luminance-chrominance counterpart of a ColorImage: y in [0,1], cb/cr
/// stored as offsets in [-0.5, 0.5].
struct LumaChroma {
    Plane y, cb, cr;
};

/// Full-range BT.601 forward transform.
LumaChroma rgb_to_ycbcr(const ColorImage& img);

/// Inverse of rgb_to_ycbcr; channels clamped to [0,1].
ColorImage ycbcr_to_rgb(const LumaChroma& lc);

/// The Y plane of rgb_to_ycbcr without computing chrominance.
Plane luminance(const ColorImage& img);

/// Mean over all pixels and all three channels of the squared difference.
/// Throws ShapeError on dimension mismatch.
double mse(const ColorImage& a, const ColorImage& b);

/// 10*log10(1/mse) with peak 1.0; +infinity when mse == 0.
double psnr(const ColorImage& a, const ColorImage& b);

/// The PSNR formula applied to a precomputed MSE. Every PSNR this library
/// emits goes through this one expression.
double psnr_from_mse(double mse_value);

} // namespace nirfuse
