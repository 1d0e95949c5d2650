// Independent reference implementations the tests check the production code
// against. Nothing here calls into the production filter/matcher paths.
#pragma once

#include <vector>

#include "nirfuse/dense_sift.hpp"
#include "nirfuse/edge_filters.hpp"
#include "nirfuse/image.hpp"
#include "nirfuse/matching.hpp"

namespace oracle {

/// Dense direct solve of the WLS system (I + lambda*A_g) u = g, assembled
/// from scratch (log-luminance forward-difference weights) and factorized
/// with Eigen. Cubic cost; small planes only.
nirfuse::Plane wls_dense(const nirfuse::Plane& src, const nirfuse::WLSParams& p);

/// WLS objective sum((u-g)^2) + lambda * sum(w * (grad u)^2) with the same
/// weight construction as wls_dense.
double wls_energy(const nirfuse::Plane& u, const nirfuse::Plane& g, const nirfuse::WLSParams& p);

/// Plain truncated-window Gaussian blur (radius ceil(3*sigma), in-bounds
/// normalization) - the sigma_range -> infinity limit of the bilateral.
nirfuse::Plane gaussian_blur(const nirfuse::Plane& src, double sigma);

/// 1-D bilateral filter evaluated longhand on a single row.
std::vector<double> bilateral_1d(const std::vector<double>& row, double sigma_spatial,
                                 double sigma_range);

/// Exhaustive O(|a|*|b|) ratio-test matcher with the same tie rules as the
/// production matcher but no shortcuts.
nirfuse::MatchSet match_bruteforce(const nirfuse::DescriptorSet& a, const nirfuse::DescriptorSet& b,
                                   double threshold);

} // namespace oracle
