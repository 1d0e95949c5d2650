#include "synth.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace synth {

using nirfuse::clamp01;
using nirfuse::ColorImage;
using nirfuse::Plane;

namespace {
constexpr double kTau = 2.0 * std::numbers::pi;
}

Plane random_plane(int w, int h, std::uint32_t seed) {
    Rng rng(seed);
    Plane p(w, h);
    for (double& v : p.data) v = rng.uni();
    return p;
}

Plane constant_plane(int w, int h, double value) { return Plane(w, h, value); }

Plane checkerboard(int w, int h, int period, double lo, double hi) {
    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            p(x, y) = ((x / period + y / period) % 2 == 0) ? lo : hi;
        }
    }
    return p;
}

Plane ramp(int w, int h) {
    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) p(x, y) = w > 1 ? static_cast<double>(x) / (w - 1) : 0.0;
    }
    return p;
}

Plane natural_plane(int w, int h, std::uint32_t seed) {
    Rng rng(seed);
    struct Wave {
        double ax, ay, phase, amp;
    };
    std::vector<Wave> waves(4);
    for (Wave& wv : waves) {
        wv.ax = rng.uni() * 2.0 * kTau / w;
        wv.ay = rng.uni() * 2.0 * kTau / h;
        wv.phase = rng.uni() * kTau;
        wv.amp = rng.range(0.08, 0.18);
    }
    struct Block {
        double x0, y0, x1, y1, delta;
    };
    std::vector<Block> blocks(10);
    for (Block& b : blocks) {
        b.x0 = rng.uni() * w;
        b.y0 = rng.uni() * h;
        b.x1 = b.x0 + rng.uni() * w / 3.0;
        b.y1 = b.y0 + rng.uni() * h / 3.0;
        b.delta = rng.range(-0.25, 0.25);
    }
    const double tex_phase = rng.uni() * kTau;

    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double v = 0.5;
            for (const Wave& wv : waves) v += wv.amp * std::sin(wv.ax * x + wv.ay * y + wv.phase);
            for (const Block& b : blocks) {
                if (x >= b.x0 && x < b.x1 && y >= b.y0 && y < b.y1) v += b.delta;
            }
            v += 0.045 * std::sin(0.9 * x + 0.7 * y + tex_phase) * std::sin(0.117 * x + 1.3);
            v += rng.range(-0.01, 0.01);
            p(x, y) = clamp01(v);
        }
    }
    return p;
}

ColorImage natural_color(int w, int h, std::uint32_t seed) {
    const Plane base = natural_plane(w, h, seed);
    const Plane tint = natural_plane(w, h, seed + 101);
    ColorImage img;
    img.r = Plane(w, h);
    img.g = Plane(w, h);
    img.b = Plane(w, h);
    for (std::size_t i = 0; i < base.size(); ++i) {
        const double v = base.data[i];
        const double t = tint.data[i] - 0.5;
        img.r.data[i] = clamp01(v + 0.3 * t);
        img.g.data[i] = clamp01(v + 0.05 * t);
        img.b.data[i] = clamp01(v - 0.25 * t);
    }
    return img;
}

SynthPair rgb_nir_pair(int w, int h, std::uint32_t seed) {
    SynthPair pair;
    pair.rgb = natural_color(w, h, seed);

    // NIR: same scene geometry, but with high-frequency texture the visible
    // channels barely see, plus slightly different smooth response.
    Rng rng(seed + 900);
    const Plane luma = nirfuse::luminance(pair.rgb);
    const Plane response = natural_plane(w, h, seed + 41);
    const double ph1 = rng.uni() * kTau;
    const double ph2 = rng.uni() * kTau;
    pair.nir = Plane(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            double v = 0.25 + 0.6 * luma.data[i] + 0.2 * (response.data[i] - 0.5);
            // fine detail only the NIR modality carries
            const double gate = 0.5 + 0.5 * std::sin(0.051 * x + 0.043 * y + ph2);
            v += 0.10 * gate * std::sin(1.9 * x + ph1) * std::sin(1.7 * y + 0.4 * ph2);
            v += rng.range(-0.008, 0.008);
            pair.nir(x, y) = clamp01(v);
        }
    }
    return pair;
}

} // namespace synth
