#pragma once

#include <vector>

#include "nirfuse/dense_sift.hpp"

namespace nirfuse {

struct Match {
    int index_a = 0;
    int index_b = 0;
    double distance = 0.0; // Euclidean, to the nearest neighbor
};

struct MatchSet {
    std::vector<Match> pairs;
    double threshold = 1.5;
    bool empty_input = false; // either side had no descriptors
};

/// Ratio-test matching: for each descriptor in `a`, find the nearest and
/// second-nearest descriptors in `b` by Euclidean distance and accept iff
/// d1 * threshold < d2. Zero descriptors on side `a` are skipped; ties keep
/// the first (lowest-index) candidate. An empty side yields an empty
/// MatchSet flagged empty_input.
MatchSet match_descriptors(const DescriptorSet& a, const DescriptorSet& b,
                           double threshold = 1.5);

} // namespace nirfuse
