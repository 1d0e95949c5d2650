#include "nirfuse/solver.hpp"

namespace nirfuse {

void FivePointSystem::apply(const double* x, double* out) const {
    const int w = width;
    const int h = height;
    auto at_edge = [&](std::size_t i, int xx, int yy) {
        double v = diag[i] * x[i];
        if (xx > 0) v -= wx[i - 1] * x[i - 1];
        if (xx < w - 1) v -= wx[i] * x[i + 1];
        if (yy > 0) v -= wy[i - w] * x[i - w];
        if (yy < h - 1) v -= wy[i] * x[i + w];
        out[i] = v;
    };

    for (int y = 0; y < h; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * w;
        if (y == 0 || y == h - 1 || w < 3) {
            for (int xx = 0; xx < w; ++xx) at_edge(row + xx, xx, y);
            continue;
        }
        // branch-free interior; the first/last column keep the guards
        at_edge(row, 0, y);
        for (std::size_t i = row + 1; i < row + w - 1; ++i) {
            out[i] = diag[i] * x[i] - wx[i - 1] * x[i - 1] - wx[i] * x[i + 1] -
                     wy[i - w] * x[i - w] - wy[i] * x[i + w];
        }
        at_edge(row + w - 1, w - 1, y);
    }
}

} // namespace nirfuse
