#pragma once

// Discrete variable-order Caputo derivatives of a sampled function:
//   * l1_derivative       - piecewise-linear (L1) formula, O(n^2) work.
//   * fast_derivative_*   - the same formula with the history part of the
//                           kernel replaced by an exponential sum; O(n N_eps)
//                           work and O(N_eps) history storage.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fracsum/esa_kernel.hpp"
#include "fracsum/gamma.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

/// D_k for k = 1..n (values[k-1] holds D_k).
struct DerivativeSeries {
    std::vector<double> values;
    [[nodiscard]] double at(std::size_t k) const { return values.at(k - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// 1 / (dt^alpha Gamma(2 - alpha)): weight of the newest increment u_k - u_{k-1}.
inline double local_scale(double alpha, double dt) {
    return 1.0 / (std::pow(dt, alpha) * gamma_eval(2.0 - alpha));
}

/// T^(-alpha) / Gamma(1 - alpha): weight of the exponential history sum.
inline double history_scale(double alpha, double horizon) {
    return std::pow(horizon, -alpha) / gamma_eval(1.0 - alpha);
}

/// a_l^k = (k-l)^(1-alpha_k) - (k-l-1)^(1-alpha_k), l = 0..k-1.
/// Increasing in l, with a_{k-1}^k = 1.
inline std::vector<double> l1_weights(double alpha_k, std::size_t k) {
    std::vector<double> a(k);
    const double p = 1.0 - alpha_k;
    for (std::size_t l = 0; l < k; ++l) {
        const double j = static_cast<double>(k - l);
        a[l] = std::pow(j, p) - (l + 1 == k ? 0.0 : std::pow(j - 1.0, p));
    }
    return a;
}

namespace detail {

inline void require_samples(std::span<const double> u, const TimeGrid& grid) {
    if (u.size() != grid.steps() + 1)
        throw std::invalid_argument("sampled function must hold n+1 values");
}

// j^(1-alpha) for j = 0..k, reusing log j from `logs`.
inline void fill_powers(std::vector<double>& pw, std::span<const double> logs, double alpha,
                        std::size_t k) {
    const double p = 1.0 - alpha;
    pw[0] = 0.0;
    pw[1] = 1.0;
    for (std::size_t j = 2; j <= k; ++j) pw[j] = std::exp(p * logs[j]);
}

inline std::vector<double> log_table(std::size_t n) {
    std::vector<double> logs(n + 1, 0.0);
    for (std::size_t j = 2; j <= n; ++j) logs[j] = std::log(static_cast<double>(j));
    return logs;
}

}  // namespace detail

/// L1 approximation of the Caputo derivative at t_1..t_n.
///
/// D_k = dt^(-alpha_k)/Gamma(2-alpha_k) * sum_{j=1}^{k} a_{j-1}^k (u_j - u_{j-1}),
/// which is the same combination as the u_l-weighted form after summation by
/// parts. Theta(n^2) work.
inline DerivativeSeries l1_derivative(std::span<const double> u, const VOFunction& alpha,
                                      const TimeGrid& grid) {
    detail::require_samples(u, grid);
    const std::size_t n = grid.steps();
    std::vector<double> diff(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) diff[j] = u[j] - u[j - 1];

    const auto logs = detail::log_table(n);
    std::vector<double> pw(n + 1);
    DerivativeSeries out;
    out.values.resize(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const double a = alpha.at(grid.t(k));
        detail::fill_powers(pw, logs, a, k);
        double hist = 0.0;
        // a_{j-1}^k = pw[k-j+1] - pw[k-j]
        for (std::size_t j = 1; j < k; ++j) hist += (pw[k - j + 1] - pw[k - j]) * diff[j];
        out.values[k - 1] = local_scale(a, grid.dt()) * (diff[k] + hist);
    }
    return out;
}

/// Running exponential moments v_{k,i} of the piecewise-constant slope,
/// v_{k,i} = int_0^{t_{k-1}} Pi_1 u'(tau) exp(-lambda_i (t_k - tau)/T) dtau.
struct ESAHistory {
    std::size_t level = 1;
    std::vector<double> moments;

    static ESAHistory initial(const ESAParams& params) {
        return ESAHistory{1, std::vector<double>(params.count(), 0.0)};
    }
};

/// Per-exponent constants of the one-step history update for a fixed dt:
///   decay_i   = exp(-x_i),
///   segment_i = T (exp(-x_i) - exp(-2 x_i)) / (lambda_i dt) = exp(-x_i)(1 - exp(-x_i)) / x_i,
/// with x_i = lambda_i dt / T. Both are independent of the time level.
struct EsaStepFactors {
    std::vector<double> decay;
    std::vector<double> segment;

    EsaStepFactors() = default;
    EsaStepFactors(const ESAParams& params, double dt) {
        const std::size_t n = params.count();
        decay.resize(n);
        segment.resize(n);
        for (std::size_t p = 0; p < n; ++p) {
            const double x = params.exponents[p] * dt / params.horizon;
            const double e = std::exp(-x);
            decay[p] = e;
            // small x: 1 - e^{-x} cancels, use expm1
            segment[p] = x > 1.0 ? (e - e * e) / x : e * (-std::expm1(-x)) / x;
        }
    }
};

/// Advances the moments from level k-1 to level k given u(t_{k-1}) and u(t_{k-2}).
inline void esa_history_advance_inplace(std::span<double> moments, const EsaStepFactors& f,
                                        double u_prev, double u_prev2) {
    const double d = u_prev - u_prev2;
    for (std::size_t p = 0; p < moments.size(); ++p)
        moments[p] = f.decay[p] * moments[p] + f.segment[p] * d;
}

inline ESAHistory esa_history_advance(const ESAHistory& hist, double u_prev, double u_prev2,
                                      const EsaStepFactors& factors) {
    if (hist.moments.size() != factors.decay.size())
        throw std::invalid_argument("esa_history_advance: history/parameter size mismatch");
    ESAHistory next{hist.level + 1, hist.moments};
    esa_history_advance_inplace(next.moments, factors, u_prev, u_prev2);
    return next;
}

/// v_{k,i} = e^{-lambda_i dt/T} v_{k-1,i}
///         + T (e^{-lambda_i dt/T} - e^{-2 lambda_i dt/T}) / (lambda_i dt) [u(t_{k-1}) - u(t_{k-2})].
inline ESAHistory esa_history_advance(const ESAHistory& hist, double u_prev, double u_prev2,
                                      const ESAParams& params, const TimeGrid& grid) {
    return esa_history_advance(hist, u_prev, u_prev2, EsaStepFactors(params, grid.dt()));
}

/// sum_i theta_i v_i.
inline double weighted_moments(std::span<const double> weights, std::span<const double> moments) {
    double acc = 0.0;
    for (std::size_t p = 0; p < weights.size(); ++p) acc += weights[p] * moments[p];
    return acc;
}

/// Fast derivative at level hist.level = k:
///   T^(-a)/Gamma(1-a) sum_i theta_{k,i} v_{k,i} + (u_k - u_{k-1}) / (dt^a Gamma(2-a)).
/// At k = 1 the history part is absent and the result is the L1 value.
inline double fast_derivative_step(const ESAHistory& hist, double u_k, double u_km1,
                                   double alpha_k, const ESAParams& params,
                                   const TimeGrid& grid) {
    const double local = local_scale(alpha_k, grid.dt()) * (u_k - u_km1);
    if (hist.level <= 1) return local;
    const auto theta = kernel_weights(params, alpha_k);
    return history_scale(alpha_k, params.horizon) * weighted_moments(theta, hist.moments) +
           local;
}

struct FastDerivativeResult {
    DerivativeSeries series;
    ESAParams params;
    /// Largest number of history scalars alive at once.
    std::size_t peak_history_scalars = 0;
};

/// Fast evaluation of the derivative at t_1..t_n with kernel accuracy epsilon.
inline FastDerivativeResult fast_derivative_series(std::span<const double> u,
                                                   const VOFunction& alpha, const TimeGrid& grid,
                                                   double epsilon) {
    detail::require_samples(u, grid);
    FastDerivativeResult r;
    r.params = select_parameters(epsilon, alpha, grid.horizon(), grid.dt());
    const EsaStepFactors factors(r.params, grid.dt());
    const std::size_t n = grid.steps();

    r.series.values.resize(n);
    r.series.values[0] = local_scale(alpha.at(grid.t(1)), grid.dt()) * (u[1] - u[0]);

    std::vector<double> moments(r.params.count(), 0.0);
    r.peak_history_scalars = moments.size();
    for (std::size_t k = 2; k <= n; ++k) {
        const double a = alpha.at(grid.t(k));
        const auto theta = kernel_weights(r.params, a);
        esa_history_advance_inplace(moments, factors, u[k - 1], u[k - 2]);
        r.series.values[k - 1] =
            history_scale(a, grid.horizon()) * weighted_moments(theta, moments) +
            local_scale(a, grid.dt()) * (u[k] - u[k - 1]);
    }
    return r;
}

/// C eps with C = max_k t_k^(1-a_k) max_{l<k} |u_l - u_{l-1}| / dt / ((1-a_k) Gamma(1-a_k)):
/// a bound on max_k |fast D_k - L1 D_k| for kernel accuracy eps. The largest
/// divided difference stands in for max |u'| since only samples are known.
inline double fast_l1_gap_bound(std::span<const double> u, const VOFunction& alpha,
                                const TimeGrid& grid, double epsilon) {
    detail::require_samples(u, grid);
    double slope = 0.0;
    double c = 0.0;
    for (std::size_t k = 2; k <= grid.steps(); ++k) {
        slope = std::max(slope, std::abs(u[k - 1] - u[k - 2]) / grid.dt());
        const double a = alpha.at(grid.t(k));
        c = std::max(c, std::pow(grid.t(k), 1.0 - a) * slope / ((1.0 - a) * gamma_eval(1.0 - a)));
    }
    return c * epsilon;
}

}  // namespace fracsum
