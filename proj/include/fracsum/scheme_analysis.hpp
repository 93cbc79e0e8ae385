#pragma once

// Analysis-only tools for the fast scheme: the explicit memory coefficients
// b_l^k, a direct solver built from them, and the a-priori stability bound.
// These cost O(k N_eps) per level and are kept off the production path.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracsum/diffusion_solver.hpp"
#include "fracsum/esa_kernel.hpp"
#include "fracsum/gamma.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/tridiagonal.hpp"
#include "fracsum/vo_caputo.hpp"

namespace fracsum {

/// Coefficients of the fast scheme written as
///   D u^k = dt^(-a_k)/Gamma(2-a_k) [u^k - sum_{l=1}^{k-1} b_l^k u^l - b_0^k u^0].
struct SchemeCoefficients {
    std::size_t level = 0;
    double alpha = 0.0;
    /// b_l^k, l = 0..k-1.
    std::vector<double> b;
    /// epsilon_k; 0 at k = 1.
    double correction = 0.0;
    /// dt^(-a_k) / Gamma(2 - a_k); s_k = dx^2 times this.
    double local_scale = 0.0;

    [[nodiscard]] double s(double dx) const noexcept { return dx * dx * local_scale; }
};

/// b_l^k and epsilon_k at level k from the closed-form segment integrals
///   int_{t_l}^{t_{l+1}} exp(-lambda_i (t_k - tau)/T) dtau
///     = (T/lambda_i) exp(-x_i (k-l-1)) (1 - exp(-x_i)),  x_i = lambda_i dt / T.
inline SchemeCoefficients scheme_coefficients(const ESAParams& params, const VOFunction& alpha,
                                              std::size_t k, const TimeGrid& grid) {
    if (k < 1 || k > grid.steps())
        throw std::out_of_range("scheme_coefficients: level outside 1..n");
    SchemeCoefficients c;
    c.level = k;
    c.alpha = alpha.at(grid.t(k));
    c.local_scale = local_scale(c.alpha, grid.dt());
    if (k == 1) {
        c.b = {1.0};
        return c;
    }

    const double dt = grid.dt();
    const double horizon = params.horizon;
    const auto theta = kernel_weights(params, c.alpha);
    const std::size_t ne = params.count();
    std::vector<double> x(ne), gap(ne);
    for (std::size_t p = 0; p < ne; ++p) {
        x[p] = params.exponents[p] * dt / horizon;
        gap[p] = (horizon / params.exponents[p]) * (-std::expm1(-x[p]));
    }
    // seg[l] = sum_i theta_i int_{t_l}^{t_{l+1}} e^{-lambda_i (t_k - tau)/T} dtau, l = 0..k-2
    std::vector<double> seg(k - 1, 0.0);
    for (std::size_t l = 0; l + 1 < k; ++l) {
        const double lag = static_cast<double>(k - l - 1);
        double acc = 0.0;
        for (std::size_t p = 0; p < ne; ++p) acc += theta[p] * gap[p] * std::exp(-x[p] * lag);
        seg[l] = acc;
    }

    const double scale = std::pow(horizon, -c.alpha) * std::pow(dt, c.alpha - 1.0) * (1.0 - c.alpha);
    c.b.resize(k);
    c.b[0] = scale * seg[0];
    for (std::size_t l = 1; l + 1 < k; ++l) c.b[l] = scale * (seg[l] - seg[l - 1]);
    c.b[k - 1] = 1.0 - scale * seg[k - 2];
    c.correction = params.epsilon / (1.0 + params.epsilon) * scale * seg[k - 2];
    return c;
}

/// Fast scheme assembled directly from scheme_coefficients, keeping every
/// level. Reference for small problems only: O(n^2 N_eps + m n^2).
inline std::vector<std::vector<double>> solve_by_coefficients(const DiffusionProblem& problem,
                                                              double epsilon) {
    const std::size_t n = problem.time.steps();
    const std::size_t mi = problem.space.interior();
    const double dx = problem.space.dx();
    const ESAParams params =
        select_parameters(epsilon, problem.alpha, problem.time.horizon(), problem.time.dt());

    std::vector<std::vector<double>> levels;
    levels.reserve(n + 1);
    std::vector<double> u0(mi);
    for (std::size_t j = 1; j <= mi; ++j) u0[j - 1] = problem.initial(problem.space.x(j));
    levels.push_back(u0);

    std::vector<double> scratch(mi);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto c = scheme_coefficients(params, problem.alpha, k, problem.time);
        const double sk = c.s(dx);
        const double tk = problem.time.t(k);
        std::vector<double> rhs(mi);
        for (std::size_t j = 0; j < mi; ++j) {
            double mem = 0.0;
            for (std::size_t l = 0; l < k; ++l) mem += c.b[l] * levels[l][j];
            rhs[j] = sk * mem + dx * dx * problem.source(problem.space.x(j + 1), tk);
        }
        solve_laplacian_shifted(2.0 + sk, rhs, scratch);
        levels.push_back(std::move(rhs));
    }
    return levels;
}

struct StabilityReport {
    double source_bound = 0.0;  // c_f = max_k ||f^k||_inf
    double gamma_bound = 0.0;   // c_gamma = max_k Gamma(1 - a_k)
    double bound = 0.0;         // e^T ||u^0|| + c_f c_gamma e^T/(1-eps) T^a_max
    double max_norm = 0.0;      // max_{k>=1} ||u^k||_inf
    /// bound - max_norm; nonnegative when the estimate holds.
    double slack = 0.0;
    [[nodiscard]] bool holds() const noexcept { return slack >= 0.0; }
};

/// Checks ||u^k||_inf <= e^T ||u^0||_inf + c_f c_gamma e^T/(1-eps) T^a_max
/// for k = 1..n on a solution of the fast scheme.
inline StabilityReport stability_check(const DiffusionProblem& problem, const Solution& solution,
                                       double epsilon) {
    const std::size_t n = problem.time.steps();
    const std::size_t mi = problem.space.interior();
    if (solution.level_norms.size() != n + 1)
        throw std::invalid_argument("stability_check: solution lacks per-level norms");

    StabilityReport r;
    for (std::size_t k = 1; k <= n; ++k) {
        const double tk = problem.time.t(k);
        double fk = 0.0;
        for (std::size_t j = 1; j <= mi; ++j)
            fk = std::max(fk, std::abs(problem.source(problem.space.x(j), tk)));
        r.source_bound = std::max(r.source_bound, fk);
        r.gamma_bound = std::max(r.gamma_bound, gamma_eval(1.0 - problem.alpha.at(tk)));
        r.max_norm = std::max(r.max_norm, solution.level_norms[k]);
    }
    const double horizon = problem.time.horizon();
    const double growth = std::exp(horizon);
    r.bound = growth * solution.level_norms[0] + r.source_bound * r.gamma_bound * growth /
                                                     (1.0 - epsilon) *
                                                     std::pow(horizon, problem.alpha.alpha_max());
    r.slack = r.bound - r.max_norm;
    return r;
}

}  // namespace fracsum
