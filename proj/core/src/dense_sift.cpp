#include "nirfuse/dense_sift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nirfuse/errors.hpp"

namespace nirfuse {

int dense_sift_grid_count(int extent, int bin_size, int step) {
    const int window = 4 * bin_size;
    if (extent < window) return 0;
    return (extent - window) / step + 1;
}

namespace {

constexpr int kSpatialBins = 4;
constexpr int kOrientBins = 8;
constexpr int kDims = kSpatialBins * kSpatialBins * kOrientBins;

struct GradientField {
    std::vector<double> mag;
    std::vector<double> obin; // orientation in bin units, [0, 8)
};

GradientField gradients(const Plane& p) {
    const int w = p.width;
    const int h = p.height;
    GradientField g;
    g.mag.resize(p.size());
    g.obin.resize(p.size());
    constexpr double to_bins = kOrientBins / (2.0 * std::numbers::pi);
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, w - 1);
            const double gx = (p(xp, y) - p(xm, y)) * 0.5;
            const double gy = (p(x, yp) - p(x, ym)) * 0.5;
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            g.mag[i] = std::sqrt(gx * gx + gy * gy);
            double ob = std::atan2(gy, gx) * to_bins;
            if (ob < 0.0) ob += kOrientBins;
            if (ob >= kOrientBins) ob -= kOrientBins;
            g.obin[i] = ob;
        }
    }
    return g;
}

void accumulate_window(const GradientField& g, int img_w, int x0, int y0, int bin_size,
                       double* hist) {
    const int window = kSpatialBins * bin_size;
    std::fill(hist, hist + kDims, 0.0);
    for (int v = 0; v < window; ++v) {
        const double by = (v + 0.5) / bin_size - 0.5;
        const int by0 = static_cast<int>(std::floor(by));
        const double fy = by - by0;
        const std::size_t row = static_cast<std::size_t>(y0 + v) * img_w + x0;
        for (int u = 0; u < window; ++u) {
            const std::size_t i = row + u;
            const double m = g.mag[i];
            if (m == 0.0) continue;
            const double bx = (u + 0.5) / bin_size - 0.5;
            const int bx0 = static_cast<int>(std::floor(bx));
            const double fx = bx - bx0;
            const double ob = g.obin[i];
            const int o0 = static_cast<int>(ob);
            const int o1 = (o0 + 1) & (kOrientBins - 1);
            const double fo = ob - o0;

            for (int dy = 0; dy < 2; ++dy) {
                const int sy = by0 + dy;
                if (sy < 0 || sy >= kSpatialBins) continue;
                const double wy = m * (dy ? fy : 1.0 - fy);
                for (int dx = 0; dx < 2; ++dx) {
                    const int sx = bx0 + dx;
                    if (sx < 0 || sx >= kSpatialBins) continue;
                    const double wxy = wy * (dx ? fx : 1.0 - fx);
                    double* cell = hist + (static_cast<std::size_t>(sy) * kSpatialBins + sx) * kOrientBins;
                    cell[o0] += wxy * (1.0 - fo);
                    cell[o1] += wxy * fo;
                }
            }
        }
    }
}

void normalize_descriptor(double* hist) {
    double norm2 = 0.0;
    for (int k = 0; k < kDims; ++k) norm2 += hist[k] * hist[k];
    if (norm2 <= 0.0) return; // zero-gradient window stays the zero vector
    double inv = 1.0 / std::sqrt(norm2);
    for (int k = 0; k < kDims; ++k) hist[k] = std::min(hist[k] * inv, 0.2);
    norm2 = 0.0;
    for (int k = 0; k < kDims; ++k) norm2 += hist[k] * hist[k];
    inv = 1.0 / std::sqrt(norm2);
    for (int k = 0; k < kDims; ++k) hist[k] *= inv;
}

DescriptorSet extract(const Plane& luma, const Plane* mask, int bin_size, int step) {
    if (bin_size < 1 || step < 1) throw ConfigError("dense_sift: bin_size and step must be >= 1");
    const int window = kSpatialBins * bin_size;
    if (luma.width < window || luma.height < window) {
        throw SizeError("dense_sift: image smaller than the " + std::to_string(window) +
                        "-pixel descriptor window");
    }

    DescriptorSet set;
    set.bin_size = bin_size;
    set.step = step;

    // Summed-area table of masked-out pixels for O(1) window queries.
    std::vector<long> bad;
    if (mask) {
        if (!mask->same_size(luma)) throw ShapeError("dense_sift: mask dimensions differ");
        const int w = luma.width, h = luma.height;
        bad.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0);
        for (int y = 0; y < h; ++y) {
            long rowsum = 0;
            for (int x = 0; x < w; ++x) {
                rowsum += (*mask)(x, y) < 0.5;
                bad[static_cast<std::size_t>(y + 1) * (w + 1) + x + 1] =
                    bad[static_cast<std::size_t>(y) * (w + 1) + x + 1] + rowsum;
            }
        }
    }
    auto window_tainted = [&](int x0, int y0) {
        if (!mask) return false;
        const int w = luma.width, h = luma.height;
        // include the central-difference halo, clamped to the image
        const int xa = std::max(x0 - 1, 0), ya = std::max(y0 - 1, 0);
        const int xb = std::min(x0 + window + 1, w), yb = std::min(y0 + window + 1, h);
        const long n = bad[static_cast<std::size_t>(yb) * (w + 1) + xb] -
                       bad[static_cast<std::size_t>(ya) * (w + 1) + xb] -
                       bad[static_cast<std::size_t>(yb) * (w + 1) + xa] +
                       bad[static_cast<std::size_t>(ya) * (w + 1) + xa];
        return n > 0;
    };

    const GradientField g = gradients(luma);
    const int nx = dense_sift_grid_count(luma.width, bin_size, step);
    const int ny = dense_sift_grid_count(luma.height, bin_size, step);
    set.descriptors.reserve(static_cast<std::size_t>(nx) * ny * kDims);
    set.center_x.reserve(static_cast<std::size_t>(nx) * ny);
    set.center_y.reserve(static_cast<std::size_t>(nx) * ny);

    double hist[kDims];
    const double half = (window - 1) / 2.0;
    for (int gy = 0; gy < ny; ++gy) {
        const int y0 = gy * step;
        for (int gx = 0; gx < nx; ++gx) {
            const int x0 = gx * step;
            if (window_tainted(x0, y0)) continue;
            accumulate_window(g, luma.width, x0, y0, bin_size, hist);
            normalize_descriptor(hist);
            for (int k = 0; k < kDims; ++k) {
                set.descriptors.push_back(static_cast<float>(hist[k]));
            }
            set.center_x.push_back(static_cast<float>(x0 + half));
            set.center_y.push_back(static_cast<float>(y0 + half));
        }
    }
    return set;
}

} // namespace

DescriptorSet dense_sift(const Plane& luma, int bin_size, int step) {
    return extract(luma, nullptr, bin_size, step);
}

DescriptorSet dense_sift_masked(const Plane& luma, const Plane& mask, int bin_size, int step) {
    return extract(luma, &mask, bin_size, step);
}

} // namespace nirfuse
