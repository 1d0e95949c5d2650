#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nirfuse/errors.hpp"

namespace nirfuse {

/// SPD system (I + lambda*A) on an image grid, where A is the five-point
/// inhomogeneous Laplacian. Edge weights are stored with lambda folded in:
/// diag = 1 + sum of incident weights, off-diagonals are the negated weights.
struct FivePointSystem {
    int width = 0;
    int height = 0;
    std::vector<double> diag;
    std::vector<double> wx; // edge (x,y)-(x+1,y); last column stays 0
    std::vector<double> wy; // edge (x,y)-(x,y+1); last row stays 0

    std::size_t size() const { return diag.size(); }
    double jacobi(std::size_t i) const { return 1.0 / diag[i]; }
    void apply(const double* x, double* out) const;
};

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for an SPD operator.
///
/// Op must provide size(), apply(const double*, double*) and jacobi(i) (the
/// inverse diagonal). Iterates until ||b - A x|| / ||b|| <= tol, verifying
/// the true residual rather than trusting the recurrence. Sequential and
/// deterministic: fixed iteration order, fixed summation order. Throws
/// ConvergenceError (with the residual history) after max_iter.
template <class Op>
std::vector<double> solve_spd(const Op& op, const std::vector<double>& rhs, double tol,
                              int max_iter, const std::vector<double>* initial = nullptr,
                              SolveStats* stats = nullptr) {
    const std::size_t n = op.size();
    if (rhs.size() != n) throw ShapeError("solve_spd: rhs size does not match operator");

    auto dot = [n](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
        return s;
    };

    const double norm_b = std::sqrt(dot(rhs, rhs));
    std::vector<double> x = initial ? *initial : std::vector<double>(n, 0.0);
    if (norm_b == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        if (stats) *stats = {0, 0.0};
        return x;
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    std::vector<double> history;

    // r = b - A x
    op.apply(x.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - r[i];

    auto true_residual = [&]() {
        op.apply(x.data(), q.data());
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = rhs[i] - q[i];
            s += d * d;
        }
        return std::sqrt(s) / norm_b;
    };

    double rel = std::sqrt(dot(r, r)) / norm_b;
    history.push_back(rel);
    if (rel <= tol) {
        const double truth = true_residual();
        if (truth <= tol) {
            if (stats) *stats = {0, truth};
            return x;
        }
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = op.jacobi(i) * r[i];
    p = z;
    double rho = dot(r, z);

    int it = 0;
    while (it < max_iter) {
        ++it;
        op.apply(p.data(), q.data());
        const double pq = dot(p, q);
        if (pq <= 0.0) {
            throw ConvergenceError("solve_spd: operator is not positive definite", rel, history);
        }
        const double alpha = rho / pq;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];

        rel = std::sqrt(dot(r, r)) / norm_b;
        history.push_back(rel);
        if (rel <= tol) {
            // The recurrence residual can drift from the true one; re-derive
            // it and keep iterating when the check fails.
            const double truth = true_residual();
            if (truth <= tol) {
                if (stats) *stats = {it, truth};
                return x;
            }
            for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i]; // q holds A x
            rel = truth;
        }

        for (std::size_t i = 0; i < n; ++i) z[i] = op.jacobi(i) * r[i];
        const double rho_next = dot(r, z);
        const double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    throw ConvergenceError("solve_spd: no convergence after " + std::to_string(max_iter) +
                               " iterations (relative residual " + std::to_string(rel) + ")",
                           rel, history);
}

} // namespace nirfuse
