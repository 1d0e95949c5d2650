#include "nirfuse/matching.hpp"

#include <cmath>
#include <limits>

namespace nirfuse {

namespace {

bool all_zero(const float* d) {
    for (int k = 0; k < 128; ++k) {
        if (d[k] != 0.0f) return false;
    }
    return true;
}

} // namespace

MatchSet match_descriptors(const DescriptorSet& a, const DescriptorSet& b, double threshold) {
    MatchSet out;
    out.threshold = threshold;
    if (a.count() == 0 || b.count() == 0) {
        out.empty_input = true;
        return out;
    }

    const std::size_t nb = b.count();
    constexpr double inf = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < a.count(); ++i) {
        const float* da = a.descriptor(i);
        if (all_zero(da)) continue;

        double best1 = inf, best2 = inf;
        int best_j = -1;
        for (std::size_t j = 0; j < nb; ++j) {
            const float* db = b.descriptor(j);
            // Squared distance, accumulated component-by-component in index
            // order. Partial sums only grow, so bailing out once the prefix
            // exceeds the second-best bound cannot change any decision.
            double s = 0.0;
            for (int k = 0; k < 128; k += 16) {
                for (int t = k; t < k + 16; ++t) {
                    const double d = static_cast<double>(da[t]) - static_cast<double>(db[t]);
                    s += d * d;
                }
                if (s > best2) break;
            }
            if (s < best1) {
                best2 = best1;
                best1 = s;
                best_j = static_cast<int>(j);
            } else if (s < best2) {
                best2 = s;
            }
        }

        const double d1 = std::sqrt(best1);
        const double d2 = std::sqrt(best2);
        if (d1 * threshold < d2) {
            out.pairs.push_back({static_cast<int>(i), best_j, d1});
        }
    }
    return out;
}

} // namespace nirfuse
