#include "nirfuse/edge_filters.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nirfuse/errors.hpp"

namespace nirfuse {

namespace {

constexpr double kLogGuard = 1e-2; // guard against log(0) in the WLS weights

void check_bf(const BFParams& p) {
    if (!(p.sigma_spatial > 0.0) || !(p.sigma_range > 0.0)) {
        throw ConfigError("bilateral filter sigmas must be positive");
    }
    if (!(p.edge_min < p.edge_max)) {
        throw ConfigError("edge_min must be below edge_max");
    }
}

void check_wls(const WLSParams& p) {
    if (p.lambda < 0.0 || !(p.alpha > 0.0) || !(p.epsilon > 0.0) || !(p.solver_tol > 0.0)) {
        throw ConfigError("invalid WLS parameters");
    }
}

} // namespace

Plane bilateral_direct(const Plane& src, const BFParams& p) {
    check_bf(p);
    const int w = src.width;
    const int h = src.height;
    const int radius = static_cast<int>(std::ceil(3.0 * p.sigma_spatial));
    const double inv2ss = 1.0 / (2.0 * p.sigma_spatial * p.sigma_spatial);
    const double inv2sr = 1.0 / (2.0 * p.sigma_range * p.sigma_range);

    // Per-offset spatial exponent arguments; dx^2 + dy^2 separates, so one
    // exp per tap covers both the spatial and range factors.
    std::vector<double> sarg(2 * radius + 1);
    for (int d = -radius; d <= radius; ++d) {
        sarg[d + radius] = -static_cast<double>(d) * d * inv2ss;
    }

    Plane out(w, h);
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - radius);
        const int y1 = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(w - 1, x + radius);
            const double c = src(x, y);
            double num = 0.0, den = 0.0;
            for (int yy = y0; yy <= y1; ++yy) {
                const double ay = sarg[yy - y + radius];
                const double* rowp = src.data.data() + static_cast<std::size_t>(yy) * w;
                const double* ax = sarg.data() + (radius - x);
                for (int xx = x0; xx <= x1; ++xx) {
                    const double v = rowp[xx];
                    const double dv = v - c;
                    const double wgt = std::exp(ay + ax[xx] - dv * dv * inv2sr);
                    num += wgt * v;
                    den += wgt;
                }
            }
            out(x, y) = clamp01(num / den);
        }
    }
    return out;
}

namespace {

// Separable Gaussian blur of one grid axis, zero-padded. The grid is sampled
// at sigma/2, so the target sigma is 2 cells; the trilinear splat and slice
// hats each add ~1/6 cell^2 of variance, which the kernel gives back
// (2^2 - 1/3) so the composed response tracks the direct filter. Kernel
// scale cancels in the slice division and is left unnormalized.
struct GridBlurKernel {
    static constexpr int radius = 6;
    double k[2 * radius + 1];
    GridBlurKernel() {
        const double var = 2.0 * 2.0 - 1.0 / 3.0;
        for (int d = -radius; d <= radius; ++d) k[d + radius] = std::exp(-d * d / (2.0 * var));
    }
};

void blur_axis(std::vector<double>& grid, int nx, int ny, int nz, int axis) {
    static const GridBlurKernel kern;
    const int dims[3] = {nx, ny, nz};
    const std::size_t strides[3] = {1, static_cast<std::size_t>(nx),
                                    static_cast<std::size_t>(nx) * ny};
    const int n = dims[axis];
    const std::size_t stride = strides[axis];
    const int nu = dims[(axis + 1) % 3];
    const int nv = dims[(axis + 2) % 3];
    const std::size_t su = strides[(axis + 1) % 3];
    const std::size_t sv = strides[(axis + 2) % 3];

    std::vector<double> line(n);
    for (int v = 0; v < nv; ++v) {
        for (int u = 0; u < nu; ++u) {
            const std::size_t base = su * u + sv * v;
            for (int i = 0; i < n; ++i) line[i] = grid[base + stride * i];
            for (int i = 0; i < n; ++i) {
                const int d0 = std::max(-GridBlurKernel::radius, -i);
                const int d1 = std::min(GridBlurKernel::radius, n - 1 - i);
                double s = 0.0;
                for (int d = d0; d <= d1; ++d) {
                    s += kern.k[d + GridBlurKernel::radius] * line[i + d];
                }
                grid[base + stride * i] = s;
            }
        }
    }
}

} // namespace

Plane bilateral_fast(const Plane& src, const BFParams& p) {
    check_bf(p);
    const int w = src.width;
    const int h = src.height;
    const double ss = p.sigma_spatial / 2.0;
    const double rs = p.sigma_range / 2.0;
    const double gmin = p.edge_min - 2.0 * p.sigma_range;
    const double gmax = p.edge_max + 2.0 * p.sigma_range;

    const int nx = static_cast<int>((w - 1) / ss) + 2;
    const int ny = static_cast<int>((h - 1) / ss) + 2;
    const int nz = static_cast<int>((gmax - gmin) / rs) + 2;
    const std::size_t cells = static_cast<std::size_t>(nx) * ny * nz;
    std::vector<double> val(cells, 0.0);
    std::vector<double> wgt(cells, 0.0);

    auto cell = [&](int gx, int gy, int gz) {
        return (static_cast<std::size_t>(gz) * ny + gy) * nx + gx;
    };
    auto zcoord = [&](double v) {
        const double c = std::min(std::max(v, gmin), gmax);
        return (c - gmin) / rs;
    };

    // Splat: trilinear distribution of the homogeneous (v, 1) pair.
    for (int y = 0; y < h; ++y) {
        const double fy = y / ss;
        const int gy = static_cast<int>(fy);
        const double ty = fy - gy;
        for (int x = 0; x < w; ++x) {
            const double v = src(x, y);
            const double fx = x / ss;
            const int gx = static_cast<int>(fx);
            const double tx = fx - gx;
            const double fz = zcoord(v);
            const int gz = static_cast<int>(fz);
            const double tz = fz - gz;
            for (int dz = 0; dz < 2; ++dz) {
                const double wz = dz ? tz : 1.0 - tz;
                for (int dy = 0; dy < 2; ++dy) {
                    const double wyv = dy ? ty : 1.0 - ty;
                    for (int dx = 0; dx < 2; ++dx) {
                        const double wv = wz * wyv * (dx ? tx : 1.0 - tx);
                        const std::size_t i = cell(gx + dx, gy + dy, gz + dz);
                        val[i] += wv * v;
                        wgt[i] += wv;
                    }
                }
            }
        }
    }

    for (int axis = 0; axis < 3; ++axis) {
        blur_axis(val, nx, ny, nz, axis);
        blur_axis(wgt, nx, ny, nz, axis);
    }

    // Slice: trilinear read of the blurred pair at the pixel's coordinates.
    Plane out(w, h);
    auto fetch = [&](const std::vector<double>& g, int gx, int gy, int gz, double tx, double ty,
                     double tz) {
        const double c000 = g[cell(gx, gy, gz)];
        const double c100 = g[cell(gx + 1, gy, gz)];
        const double c010 = g[cell(gx, gy + 1, gz)];
        const double c110 = g[cell(gx + 1, gy + 1, gz)];
        const double c001 = g[cell(gx, gy, gz + 1)];
        const double c101 = g[cell(gx + 1, gy, gz + 1)];
        const double c011 = g[cell(gx, gy + 1, gz + 1)];
        const double c111 = g[cell(gx + 1, gy + 1, gz + 1)];
        const double a = (c000 * (1 - tx) + c100 * tx) * (1 - ty) + (c010 * (1 - tx) + c110 * tx) * ty;
        const double b = (c001 * (1 - tx) + c101 * tx) * (1 - ty) + (c011 * (1 - tx) + c111 * tx) * ty;
        return a * (1 - tz) + b * tz;
    };

    for (int y = 0; y < h; ++y) {
        const double fy = y / ss;
        const int gy = static_cast<int>(fy);
        const double ty = fy - gy;
        for (int x = 0; x < w; ++x) {
            const double v = src(x, y);
            const double fx = x / ss;
            const int gx = static_cast<int>(fx);
            const double tx = fx - gx;
            const double fz = zcoord(v);
            const int gz = static_cast<int>(fz);
            const double tz = fz - gz;
            const double num = fetch(val, gx, gy, gz, tx, ty, tz);
            const double den = fetch(wgt, gx, gy, gz, tx, ty, tz);
            out(x, y) = den > 1e-12 ? clamp01(num / den) : v;
        }
    }
    return out;
}

FivePointSystem wls_system(const Plane& src, const WLSParams& p) {
    check_wls(p);
    const int w = src.width;
    const int h = src.height;
    FivePointSystem sys;
    sys.width = w;
    sys.height = h;
    sys.diag.assign(src.size(), 1.0);
    sys.wx.assign(src.size(), 0.0);
    sys.wy.assign(src.size(), 0.0);

    std::vector<double> ell(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) ell[i] = std::log(src.data[i] + kLogGuard);

    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x + 1 < w; ++x) {
            const std::size_t i = row + x;
            const double d = ell[i + 1] - ell[i];
            const double wgt = p.lambda / (std::pow(std::abs(d), p.alpha) + p.epsilon);
            sys.wx[i] = wgt;
            sys.diag[i] += wgt;
            sys.diag[i + 1] += wgt;
        }
    }
    for (int y = 0; y + 1 < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const std::size_t i = row + x;
            const double d = ell[i + w] - ell[i];
            const double wgt = p.lambda / (std::pow(std::abs(d), p.alpha) + p.epsilon);
            sys.wy[i] = wgt;
            sys.diag[i] += wgt;
            sys.diag[i + w] += wgt;
        }
    }
    return sys;
}

Plane wls_smooth(const Plane& src, const WLSParams& p) {
    check_wls(p);
    if (p.lambda == 0.0) {
        return src; // (I + 0*A) u = g
    }
    const FivePointSystem sys = wls_system(src, p);
    // The solution is a smoothed version of the input, so the input is a
    // good starting point; convergence is still verified on the true
    // residual regardless of the seed.
    std::vector<double> u = solve_spd(sys, src.data, p.solver_tol, p.max_iter, &src.data);
    Plane out(src.width, src.height);
    for (std::size_t i = 0; i < u.size(); ++i) out.data[i] = clamp01(u[i]);
    return out;
}

LayerPair decompose(const Plane& src, FilterKind kind, const BFParams& bf, const WLSParams& wls) {
    LayerPair lp;
    switch (kind) {
        case FilterKind::BilateralDirect:
            lp.base = bilateral_direct(src, bf);
            break;
        case FilterKind::BilateralFast:
            lp.base = bilateral_fast(src, bf);
            break;
        case FilterKind::Wls:
            lp.base = wls_smooth(src, wls);
            break;
    }
    lp.detail = Plane(src.width, src.height);
    for (std::size_t i = 0; i < src.size(); ++i) {
        lp.detail.data[i] = src.data[i] - lp.base.data[i];
    }
    return lp;
}

} // namespace nirfuse
