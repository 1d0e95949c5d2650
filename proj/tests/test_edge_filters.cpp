#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nirfuse/edge_filters.hpp"
#include "nirfuse/errors.hpp"
#include "nirfuse/solver.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace nirfuse;

namespace {

double max_abs_diff(const Plane& a, const Plane& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

double mean_abs_diff(const Plane& a, const Plane& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.data[i] - b.data[i]);
    return s / a.size();
}

// Small parameters keep the direct filter's O(r^2) window affordable.
BFParams small_bf() {
    BFParams p;
    p.sigma_spatial = 4.0;
    p.sigma_range = 0.1;
    p.edge_min = 0.0;
    p.edge_max = 1.0;
    return p;
}

struct IdentityOp {
    std::size_t n;
    std::size_t size() const { return n; }
    double jacobi(std::size_t) const { return 1.0; }
    void apply(const double* x, double* out) const {
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i];
    }
};

struct DiagonalOp {
    std::vector<double> d;
    std::size_t size() const { return d.size(); }
    double jacobi(std::size_t i) const { return 1.0 / d[i]; }
    void apply(const double* x, double* out) const {
        for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] * x[i];
    }
};

} // namespace

// ---------------------------------------------------------------- BF ----

TEST_CASE("bilateral_direct keeps constants") {
    for (double c : {0.0, 0.3, 1.0}) {
        const Plane p = synth::constant_plane(17, 13, c);
        const Plane out = bilateral_direct(p, small_bf());
        CHECK(max_abs_diff(p, out) == 0.0);
    }
}

TEST_CASE("bilateral_direct with huge sigma_range degenerates to a Gaussian blur") {
    BFParams p = small_bf();
    p.sigma_range = 150.0;
    p.edge_max = 200.0; // keep edge_min < edge_max valid; grid unused here
    const Plane img = synth::natural_plane(33, 29, 7);
    const Plane bf = bilateral_direct(img, p);
    const Plane blur = oracle::gaussian_blur(img, p.sigma_spatial);
    CHECK(max_abs_diff(bf, blur) < 1e-4);
}

TEST_CASE("bilateral_direct matches the 1-D brute-force filter and preserves a step edge") {
    const int n = 64;
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) row[i] = i < n / 2 ? 0.0 : 1.0;
    Plane img(n, 1);
    img.data = row;

    BFParams p = small_bf();
    const Plane out = bilateral_direct(img, p);
    const std::vector<double> ref = oracle::bilateral_1d(row, p.sigma_spatial, p.sigma_range);
    for (int i = 0; i < n; ++i) CHECK(out(i, 0) == doctest::Approx(ref[i]).epsilon(1e-12));

    // edge midpoint: first 0.5 crossing, located by linear interpolation
    auto crossing = [](auto value_at, int count) {
        for (int i = 0; i + 1 < count; ++i) {
            const double a = value_at(i), b = value_at(i + 1);
            if (a < 0.5 && b >= 0.5) return i + (0.5 - a) / (b - a);
        }
        return -1.0;
    };
    const double before = crossing([&](int i) { return img(i, 0); }, n);
    const double after = crossing([&](int i) { return out(i, 0); }, n);
    CHECK(std::abs(after - before) < 1.0);
}

TEST_CASE("bilateral_direct output is contained in the input range per pixel") {
    const Plane img = synth::random_plane(21, 19, 3);
    double lo = 1.0, hi = 0.0;
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const Plane out = bilateral_direct(img, small_bf());
    for (double v : out.data) {
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("bilateral_fast keeps constants within 1e-4") {
    BFParams p; // paper defaults
    for (double c : {0.05, 0.5, 0.97}) {
        const Plane img = synth::constant_plane(40, 30, c);
        const Plane out = bilateral_fast(img, p);
        CHECK(max_abs_diff(img, out) < 1e-4);
    }
}

TEST_CASE("bilateral_fast tracks bilateral_direct within the grid error budget") {
    const BFParams p; // paper defaults: sigma_spatial 42.43, sigma_range 0.1
    for (std::uint32_t seed : {11u, 12u}) {
        const Plane img = synth::natural_plane(96, 72, seed);
        const Plane fast = bilateral_fast(img, p);
        const Plane direct = bilateral_direct(img, p);
        CHECK(max_abs_diff(fast, direct) <= 0.01);
        CHECK(mean_abs_diff(fast, direct) <= 0.002);
    }
}

TEST_CASE("bilateral params are validated") {
    BFParams p;
    p.sigma_spatial = 0.0;
    CHECK_THROWS_AS((void)bilateral_fast(synth::constant_plane(8, 8, 0.5), p), ConfigError);
    p = BFParams{};
    p.edge_min = 1.0;
    p.edge_max = 0.2;
    CHECK_THROWS_AS((void)bilateral_direct(synth::constant_plane(8, 8, 0.5), p), ConfigError);
}

// --------------------------------------------------------------- WLS ----

TEST_CASE("wls_smooth with lambda 0 returns the input bitwise") {
    WLSParams p;
    p.lambda = 0.0;
    const Plane img = synth::random_plane(23, 17, 9);
    const Plane out = wls_smooth(img, p);
    REQUIRE(out.size() == img.size());
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(out.data[i] == img.data[i]);
}

TEST_CASE("wls_smooth keeps constants bitwise") {
    const Plane img = synth::constant_plane(19, 11, 0.37);
    const Plane out = wls_smooth(img, WLSParams{});
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(out.data[i] == img.data[i]);
}

TEST_CASE("wls_smooth matches the dense direct solve on 8x8 planes") {
    const WLSParams p;
    for (std::uint32_t seed = 0; seed < 10; ++seed) {
        const Plane img = synth::random_plane(8, 8, 100 + seed);
        const Plane pcg = wls_smooth(img, p);
        const Plane dense = oracle::wls_dense(img, p);
        CHECK(max_abs_diff(pcg, dense) < 1e-6);
    }
}

TEST_CASE("wls solution is a local minimum of the objective") {
    const WLSParams p;
    const Plane g = synth::natural_plane(12, 10, 77);
    const Plane u = wls_smooth(g, p);
    const double e0 = oracle::wls_energy(u, g, p);
    synth::Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        Plane v = u;
        const std::size_t i = static_cast<std::size_t>(rng.uni() * v.size());
        v.data[i] += rng.uni() < 0.5 ? 1e-3 : -1e-3;
        CHECK(oracle::wls_energy(v, g, p) >= e0 - 1e-12);
    }
}

TEST_CASE("wls_smooth raises ConvergenceError with the residual history") {
    WLSParams p;
    p.max_iter = 1;
    p.solver_tol = 1e-14;
    const Plane img = synth::natural_plane(32, 32, 13);
    try {
        (void)wls_smooth(img, p);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.achieved_residual > p.solver_tol);
        CHECK(!e.residual_history.empty());
    }
}

// --------------------------------------------------------- decompose ----

TEST_CASE("decompose reconstructs the source for every filter selector") {
    const Plane img = synth::natural_plane(48, 40, 21);
    const BFParams bf = small_bf();
    const WLSParams wls;
    for (FilterKind kind : {FilterKind::BilateralDirect, FilterKind::BilateralFast, FilterKind::Wls}) {
        const LayerPair lp = decompose(img, kind, bf, wls);
        Plane sum(img.width, img.height);
        for (std::size_t i = 0; i < img.size(); ++i) sum.data[i] = lp.base.data[i] + lp.detail.data[i];
        CHECK(max_abs_diff(sum, img) <= 1e-6);
    }
}

TEST_CASE("decompose of a constant plane has an all-zero detail layer") {
    const Plane img = synth::constant_plane(26, 14, 0.42);
    const LayerPair lp = decompose(img, FilterKind::Wls, small_bf(), WLSParams{});
    for (double v : lp.detail.data) CHECK(v == 0.0);
}

TEST_CASE("decompose of a textured plane has positive detail energy") {
    const Plane img = synth::checkerboard(40, 40, 5);
    const LayerPair lp = decompose(img, FilterKind::Wls, small_bf(), WLSParams{});
    double energy = 0.0;
    for (double v : lp.detail.data) energy += std::abs(v);
    CHECK(energy / lp.detail.size() > 0.0);
}

// --------------------------------------------------------- solve_spd ----

TEST_CASE("solve_spd: identity operator converges in one iteration") {
    const std::vector<double> b = {1.0, -2.0, 3.0, 0.25};
    SolveStats stats;
    const auto x = solve_spd(IdentityOp{b.size()}, b, 1e-12, 10, nullptr, &stats);
    CHECK(x == b);
    CHECK(stats.iterations == 1);
}

TEST_CASE("solve_spd: diagonal operator inverts exactly") {
    DiagonalOp op{{2.0, 2.0, 2.0, 2.0, 2.0}};
    const std::vector<double> b = {2.0, 4.0, -6.0, 1.0, 0.0};
    const auto x = solve_spd(op, b, 1e-12, 10);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(x[i] == doctest::Approx(b[i] / 2.0).epsilon(1e-15));
}

TEST_CASE("solve_spd on the assembled WLS system matches the dense oracle") {
    const Plane img = synth::random_plane(8, 8, 345);
    const WLSParams p;
    const FivePointSystem sys = wls_system(img, p);
    const auto x = solve_spd(sys, img.data, 1e-10, 2000);
    const Plane dense = oracle::wls_dense(img, p);
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - dense.data[i]));
    CHECK(m < 1e-6);
}

TEST_CASE("solve_spd reports non-convergence with history") {
    const Plane img = synth::natural_plane(24, 24, 4);
    const FivePointSystem sys = wls_system(img, WLSParams{});
    CHECK_THROWS_AS((void)solve_spd(sys, img.data, 1e-15, 2), ConvergenceError);
}

TEST_CASE("solve_spd with a zero right-hand side returns zero") {
    const Plane img = synth::natural_plane(8, 8, 4);
    const FivePointSystem sys = wls_system(img, WLSParams{});
    const std::vector<double> zero(sys.size(), 0.0);
    const auto x = solve_spd(sys, zero, 1e-10, 10);
    for (double v : x) CHECK(v == 0.0);
}
