#pragma once

// Time marching for the scalar problem D^{a(t)} u = g(t), u(0) = u0: the
// diffusion schemes with the spatial operator removed. Each step solves the
// discrete derivative formula for the newest value u_k.

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracsum/esa_kernel.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/vo_caputo.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

struct FractionalOde {
    TimeGrid time;
    VOFunction alpha;
    std::function<double(double)> rhs;
    double initial = 0.0;
};

struct OdeSolution {
    double final_value = 0.0;
    /// u_0..u_n when requested.
    std::vector<double> trajectory;
    std::optional<ESAParams> params;
    double seconds = 0.0;
    /// History scalars held by the marcher: n+1 values for L1, N_eps + 2 for the fast scheme.
    std::size_t aux_scalars = 0;
    [[nodiscard]] std::size_t n_eps() const noexcept { return params ? params->count() : 0; }
};

/// L1 marching: u_k = u_{k-1} + g_k dt^{a_k} Gamma(2-a_k) - sum_{j<k} a_{j-1}^k (u_j - u_{j-1}).
inline OdeSolution march_l1(const FractionalOde& ode, bool keep_trajectory = false) {
    if (!ode.rhs) throw std::invalid_argument("march_l1: missing right-hand side");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = ode.time.steps();
    const double dt = ode.time.dt();

    std::vector<double> diff(n + 1, 0.0);
    const auto logs = detail::log_table(n);
    std::vector<double> pw(n + 1);
    double u = ode.initial;
    OdeSolution out;
    if (keep_trajectory) out.trajectory.push_back(u);
    for (std::size_t k = 1; k <= n; ++k) {
        const double tk = ode.time.t(k);
        const double a = ode.alpha.at(tk);
        detail::fill_powers(pw, logs, a, k);
        double hist = 0.0;
        for (std::size_t j = 1; j < k; ++j) hist += (pw[k - j + 1] - pw[k - j]) * diff[j];
        const double next = u + ode.rhs(tk) / local_scale(a, dt) - hist;
        diff[k] = next - u;
        u = next;
        if (keep_trajectory) out.trajectory.push_back(u);
    }
    out.final_value = u;
    out.aux_scalars = n + 1;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

/// Fast marching with kernel accuracy epsilon:
/// u_k = u_{k-1} + dt^{a_k} Gamma(2-a_k) [g_k - T^{-a_k}/Gamma(1-a_k) sum_i theta_{k,i} v_{k,i}].
inline OdeSolution march_fast(const FractionalOde& ode, double epsilon,
                              bool keep_trajectory = false) {
    if (!ode.rhs) throw std::invalid_argument("march_fast: missing right-hand side");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = ode.time.steps();
    const double dt = ode.time.dt();
    const double horizon = ode.time.horizon();

    OdeSolution out;
    out.params = select_parameters(epsilon, ode.alpha, horizon, dt);
    const ESAParams& params = *out.params;
    const EsaStepFactors factors(params, dt);
    std::vector<double> moments(params.count(), 0.0);

    double u_prev2 = ode.initial;
    double u_prev = ode.initial;
    if (keep_trajectory) out.trajectory.push_back(u_prev);
    for (std::size_t k = 1; k <= n; ++k) {
        const double tk = ode.time.t(k);
        const double a = ode.alpha.at(tk);
        double hist = 0.0;
        if (k >= 2) {
            esa_history_advance_inplace(moments, factors, u_prev, u_prev2);
            hist = history_scale(a, horizon) * weighted_moments(kernel_weights(params, a), moments);
        }
        const double next = u_prev + (ode.rhs(tk) - hist) / local_scale(a, dt);
        u_prev2 = u_prev;
        u_prev = next;
        if (keep_trajectory) out.trajectory.push_back(next);
    }
    out.final_value = u_prev;
    out.aux_scalars = moments.size() + 2;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace fracsum
