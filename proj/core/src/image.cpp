#include "nirfuse/image.hpp"

#include <cmath>
#include <limits>

#include "nirfuse/errors.hpp"

namespace nirfuse {

namespace {

// Full-range BT.601 chroma denominators: Cb = (B-Y)/1.772, Cr = (R-Y)/1.402,
// which puts both offsets in [-0.5, 0.5] for in-gamut input.
constexpr double kCbDiv = 1.772;
constexpr double kCrDiv = 1.402;

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

} // namespace

LumaChroma rgb_to_ycbcr(const ColorImage& img) {
    LumaChroma lc;
    lc.y = Plane(img.width(), img.height());
    lc.cb = Plane(img.width(), img.height());
    lc.cr = Plane(img.width(), img.height());
    const std::size_t n = lc.y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.r.data[i];
        const double g = img.g.data[i];
        const double b = img.b.data[i];
        const double y = kLumaR * r + kLumaG * g + kLumaB * b;
        lc.y.data[i] = clamp01(y);
        lc.cb.data[i] = clamp((b - y) / kCbDiv, -0.5, 0.5);
        lc.cr.data[i] = clamp((r - y) / kCrDiv, -0.5, 0.5);
    }
    return lc;
}

ColorImage ycbcr_to_rgb(const LumaChroma& lc) {
    ColorImage img;
    img.r = Plane(lc.y.width, lc.y.height);
    img.g = Plane(lc.y.width, lc.y.height);
    img.b = Plane(lc.y.width, lc.y.height);
    const std::size_t n = lc.y.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double y = lc.y.data[i];
        const double cb = lc.cb.data[i];
        const double cr = lc.cr.data[i];
        const double r = y + kCrDiv * cr;
        const double b = y + kCbDiv * cb;
        const double g = (y - kLumaR * r - kLumaB * b) / kLumaG;
        img.r.data[i] = clamp01(r);
        img.g.data[i] = clamp01(g);
        img.b.data[i] = clamp01(b);
    }
    return img;
}

Plane luminance(const ColorImage& img) {
    Plane y(img.width(), img.height());
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) {
        y.data[i] = clamp01(kLumaR * img.r.data[i] + kLumaG * img.g.data[i] + kLumaB * img.b.data[i]);
    }
    return y;
}

double mse(const ColorImage& a, const ColorImage& b) {
    if (!a.same_size(b)) {
        throw ShapeError("mse: dimension mismatch");
    }
    const std::size_t n = a.r.size();
    double acc = 0.0;
    // Fixed channel order keeps the sum deterministic.
    const Plane* pas[3] = {&a.r, &a.g, &a.b};
    const Plane* pbs[3] = {&b.r, &b.g, &b.b};
    for (int c = 0; c < 3; ++c) {
        const std::vector<double>& da = pas[c]->data;
        const std::vector<double>& db = pbs[c]->data;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = da[i] - db[i];
            acc += d * d;
        }
    }
    return acc / (3.0 * static_cast<double>(n));
}

double psnr_from_mse(double mse_value) {
    if (mse_value <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(1.0 / mse_value);
}

double psnr(const ColorImage& a, const ColorImage& b) {
    return psnr_from_mse(mse(a, b));
}

} // namespace nirfuse
