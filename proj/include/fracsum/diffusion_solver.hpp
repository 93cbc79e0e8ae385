#pragma once

// Finite-difference solvers for the variable-order time-fractional diffusion
// problem
//
//     D^{a(t)} u = u_xx + f(x, t),   x in (0, x_R), t in (0, T],
//     u(x, 0) = phi(x),  u(0, t) = u(x_R, t) = 0,
//
// with central differences in space. Each time level solves
//
//     -u_{j+1}^k + (2 + s_k) u_j^k - u_{j-1}^k = RHS_j^k,
//     s_k = dx^2 dt^(-a_k) / Gamma(2 - a_k),
//
// where RHS carries the discrete memory term: the full L1 sum (solve_l1) or
// the exponential-sum history (solve_fast_esa).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsum/esa_kernel.hpp"
#include "fracsum/parallel.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/tridiagonal.hpp"
#include "fracsum/vo_caputo.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

/// Nodes x_j = j dx, j = 0..m, dx = x_R / m.
class SpatialGrid {
public:
    SpatialGrid(double x_right, std::size_t cells) : x_right_(x_right), cells_(cells) {
        if (!(x_right > 0.0) || !std::isfinite(x_right))
            throw std::invalid_argument("SpatialGrid: x_R must be positive and finite");
        if (cells < 2) throw std::invalid_argument("SpatialGrid: need m >= 2");
        dx_ = x_right / static_cast<double>(cells);
    }
    [[nodiscard]] double x_right() const noexcept { return x_right_; }
    [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t interior() const noexcept { return cells_ - 1; }
    [[nodiscard]] double dx() const noexcept { return dx_; }
    [[nodiscard]] double x(std::size_t j) const noexcept {
        return j == cells_ ? x_right_ : static_cast<double>(j) * dx_;
    }

private:
    double x_right_;
    std::size_t cells_;
    double dx_;
};

using SourceFn = std::function<double(double x, double t)>;
using InitialFn = std::function<double(double x)>;

/// Homogeneous Dirichlet problem on [0, x_R] x [0, T].
struct DiffusionProblem {
    SpatialGrid space;
    TimeGrid time;
    VOFunction alpha;
    SourceFn source;
    InitialFn initial;
};

struct SolverOptions {
    /// Threads for per-node work inside a step; 0 = sequential.
    unsigned threads = 0;
    /// Keep u^k for k = 0, s, 2s, ... and n when s > 0. Off by default so
    /// the fast solver only holds u^k, u^{k-1}, u^{k-2}.
    std::size_t snapshot_stride = 0;
};

struct Snapshot {
    std::size_t level = 0;
    double t = 0.0;
    std::vector<double> u;  // m+1 values, zero at both ends
};

struct Solution {
    std::string scheme;
    /// u^n on all m+1 nodes; boundary entries are 0.
    std::vector<double> final_field;
    std::vector<Snapshot> snapshots;
    /// max_j |u_j^k| for k = 0..n.
    std::vector<double> level_norms;
    /// Final moments v_{n,i} per interior node, node-major (fast scheme only).
    std::vector<double> history;
    std::optional<ESAParams> params;
    double seconds = 0.0;
    /// Live solver-state scalars that scale with the grid: memory term plus
    /// per-node work vectors. Level-independent kernel constants are excluded.
    std::size_t aux_scalars = 0;
    [[nodiscard]] std::size_t n_eps() const noexcept { return params ? params->count() : 0; }
};

namespace detail {

inline void require_problem(const DiffusionProblem& p) {
    if (!p.source || !p.initial) throw std::invalid_argument("DiffusionProblem: missing f or phi");
}

inline std::vector<double> full_field(std::span<const double> interior) {
    std::vector<double> u(interior.size() + 2, 0.0);
    std::copy(interior.begin(), interior.end(), u.begin() + 1);
    return u;
}

inline double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Records norm and optional snapshot of interior level k.
struct LevelRecorder {
    const DiffusionProblem& problem;
    const SolverOptions& options;
    Solution& out;

    void record(std::size_t k, std::span<const double> interior) const {
        out.level_norms[k] = sup_norm(interior);
        const std::size_t n = problem.time.steps();
        const std::size_t s = options.snapshot_stride;
        if (s > 0 && (k % s == 0 || k == n))
            out.snapshots.push_back({k, problem.time.t(k), full_field(interior)});
    }
};

inline std::vector<double> initial_interior(const DiffusionProblem& p) {
    const std::size_t mi = p.space.interior();
    std::vector<double> u(mi);
    for (std::size_t j = 1; j <= mi; ++j) u[j - 1] = p.initial(p.space.x(j));
    return u;
}

}  // namespace detail

/// L1 scheme. Keeps every increment u^l - u^{l-1}; O(m n^2) work, O(m n) storage.
inline Solution solve_l1(const DiffusionProblem& problem, const SolverOptions& options = {}) {
    detail::require_problem(problem);
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = problem.time.steps();
    const std::size_t mi = problem.space.interior();
    const double dt = problem.time.dt();
    const double dx2 = problem.space.dx() * problem.space.dx();

    Solution out;
    out.scheme = "l1";
    out.level_norms.assign(n + 1, 0.0);
    const detail::LevelRecorder rec{problem, options, out};

    std::vector<double> prev = detail::initial_interior(problem);
    rec.record(0, prev);
    std::vector<double> incr(n * mi, 0.0);  // row l-1 holds u^l - u^{l-1}
    std::vector<double> rhs(mi), scratch(mi);
    const auto logs = detail::log_table(n);
    std::vector<double> pw(n + 1), a(n);
    ChunkedTeam team(options.threads);

    for (std::size_t k = 1; k <= n; ++k) {
        const double tk = problem.time.t(k);
        const double alpha = problem.alpha.at(tk);
        const double sk = dx2 * local_scale(alpha, dt);
        detail::fill_powers(pw, logs, alpha, k);
        // a_{l-1}^k for l = 1..k-1
        for (std::size_t l = 1; l < k; ++l) a[l] = pw[k - l + 1] - pw[k - l];

        team.run(mi, [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) rhs[j] = 0.0;
            for (std::size_t l = 1; l < k; ++l) {
                const double w = a[l];
                const double* row = &incr[(l - 1) * mi];
                for (std::size_t j = b; j < e; ++j) rhs[j] += w * row[j];
            }
            for (std::size_t j = b; j < e; ++j)
                rhs[j] = sk * (prev[j] - rhs[j]) +
                         dx2 * problem.source(problem.space.x(j + 1), tk);
        });
        solve_laplacian_shifted(2.0 + sk, rhs, scratch);

        double* row = &incr[(k - 1) * mi];
        for (std::size_t j = 0; j < mi; ++j) {
            row[j] = rhs[j] - prev[j];
            prev[j] = rhs[j];
        }
        rec.record(k, prev);
    }

    out.final_field = detail::full_field(prev);
    out.aux_scalars = incr.size() + 3 * mi;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Fast exponential-sum scheme: one history of N_eps moments per interior
/// node, O(m n N_eps) work and O(m N_eps) storage.
inline Solution solve_fast_esa(const DiffusionProblem& problem, double epsilon,
                               const SolverOptions& options = {}) {
    detail::require_problem(problem);
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = problem.time.steps();
    const std::size_t mi = problem.space.interior();
    const double dt = problem.time.dt();
    const double horizon = problem.time.horizon();
    const double dx2 = problem.space.dx() * problem.space.dx();

    Solution out;
    out.scheme = "fast";
    out.params = select_parameters(epsilon, problem.alpha, horizon, dt);
    const ESAParams& params = *out.params;
    const std::size_t ne = params.count();
    const EsaStepFactors factors(params, dt);
    out.level_norms.assign(n + 1, 0.0);
    const detail::LevelRecorder rec{problem, options, out};

    std::vector<double> prev2(mi, 0.0);
    std::vector<double> prev = detail::initial_interior(problem);
    rec.record(0, prev);
    std::vector<double> bank(mi * ne, 0.0);
    std::vector<double> rhs(mi), scratch(mi);
    ChunkedTeam team(options.threads);

    for (std::size_t k = 1; k <= n; ++k) {
        const double tk = problem.time.t(k);
        const double alpha = problem.alpha.at(tk);
        const double sk = dx2 * local_scale(alpha, dt);

        if (k == 1) {
            for (std::size_t j = 0; j < mi; ++j)
                rhs[j] = sk * prev[j] + dx2 * problem.source(problem.space.x(j + 1), tk);
        } else {
            const auto theta = kernel_weights(params, alpha);
            const double hist = dx2 * history_scale(alpha, horizon);
            team.run(mi, [&](std::size_t b, std::size_t e) {
                for (std::size_t j = b; j < e; ++j) {
                    double* v = &bank[j * ne];
                    const double d = prev[j] - prev2[j];
                    double acc = 0.0;
                    for (std::size_t p = 0; p < ne; ++p) {
                        v[p] = factors.decay[p] * v[p] + factors.segment[p] * d;
                        acc += theta[p] * v[p];
                    }
                    rhs[j] = sk * prev[j] - hist * acc +
                             dx2 * problem.source(problem.space.x(j + 1), tk);
                }
            });
        }
        solve_laplacian_shifted(2.0 + sk, rhs, scratch);
        prev2.swap(prev);
        prev.swap(rhs);
        rec.record(k, prev);
    }

    out.final_field = detail::full_field(prev);
    out.history = std::move(bank);
    out.aux_scalars = out.history.size() + 4 * mi;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace fracsum
