#pragma once

#include "nirfuse/image.hpp"
#include "nirfuse/solver.hpp"

namespace nirfuse {

struct BFParams {
    double sigma_spatial = 42.43; // pixels
    double sigma_range = 0.1;     // intensity units
    double edge_min = 0.2;        // intensity-domain limits of the fast grid
    double edge_max = 1.0;
};

struct WLSParams {
    double lambda = 0.125; // smoothness weight
    double alpha = 1.2;    // gradient-sensitivity exponent
    double epsilon = 1e-4; // weight regularizer
    double solver_tol = 1e-6;
    int max_iter = 2000;
};

/// Base/detail split with the exact-reconstruction invariant
/// base + detail == source (detail is signed).
struct LayerPair {
    Plane base;
    Plane detail;
};

enum class FilterKind { BilateralDirect, BilateralFast, Wls };

/// Brute-force bilateral filter (range-and-space Gaussian weighted mean,
/// kernel radius ceil(3*sigma_spatial), in-bounds taps only). Slow; serves
/// as the accuracy oracle for bilateral_fast.
Plane bilateral_direct(const Plane& src, const BFParams& p);

/// Grid-downsampled bilateral filter: trilinear splat onto an
/// (x, y, intensity) grid sampled at sigma/2 per axis, Gaussian blur of the
/// homogeneous (value, weight) pair, trilinear slice. The intensity axis
/// spans [edge_min - 2*sigma_range, edge_max + 2*sigma_range]; intensities
/// outside are clamped into the grid.
Plane bilateral_fast(const Plane& src, const BFParams& p);

/// Edge-preserving smoothing as the minimizer of
///   sum (u - g)^2 + lambda * sum w |grad u|^2,
/// w = (|grad log(g + 1e-2)|^alpha + epsilon)^-1 per axis (forward
/// differences). Solved with Jacobi-PCG to solver_tol; lambda = 0 returns
/// the input bitwise. Throws ConvergenceError past max_iter.
Plane wls_smooth(const Plane& src, const WLSParams& p);

/// Assembles the (I + lambda*A) system wls_smooth solves. Exposed for
/// diagnostics and tests.
FivePointSystem wls_system(const Plane& src, const WLSParams& p);

LayerPair decompose(const Plane& src, FilterKind kind, const BFParams& bf, const WLSParams& wls);

} // namespace nirfuse
