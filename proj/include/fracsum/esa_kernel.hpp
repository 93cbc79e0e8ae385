#pragma once

// Exponential-sum approximation of the power kernel s^(-a) on [delta, 1]:
//
//     s^(-a) ~ sum_{i = n_lo+1}^{n_hi} theta_i(a) exp(-lambda_i s),
//     lambda_i = exp(i h),  theta_i(a) = h exp(a i h) / Gamma(a).
//
// The exponents depend only on (h, n_lo, n_hi); the order a enters through
// the weights alone, so one set of exponents serves every time level of a
// variable-order derivative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fracsum/gamma.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

/// Largest step allowed for accuracy `epsilon` and maximal order `alpha_max`.
inline double esa_step_bound(double epsilon, double alpha_max) {
    return 2.0 * std::numbers::pi /
           (std::log(3.0) + alpha_max * std::log(1.0 / std::cos(1.0)) + std::log(1.0 / epsilon));
}

/// Upper bound on the number of exponentials, N_eps <= (1/10)(...)(...).
inline double esa_count_bound(double epsilon, double alpha_min, double alpha_max, double horizon,
                              double dt) {
    const double log_inv_eps = std::log(1.0 / epsilon);
    return 0.1 * (2.0 * log_inv_eps + std::log(alpha_max) + 2.0) *
           (std::log(horizon / dt) + log_inv_eps / alpha_min + std::log(log_inv_eps) + 1.5);
}

/// Quadrature step and index range (n_lo, n_hi].
struct EsaIndexRange {
    double h = 0.0;
    int n_lo = 0;
    int n_hi = 0;
    [[nodiscard]] int count() const noexcept { return n_hi - n_lo; }
};

/// The closed-form choice: h at its upper bound,
///   n_lo = ceil((log eps + log Gamma(1 + alpha_max)) / (h alpha_min)),
///   n_hi = floor((log(T/dt) + log log(1/eps) + log alpha_min + 1/2) / h).
inline EsaIndexRange formula_index_range(double epsilon, double alpha_min, double alpha_max,
                                         double horizon, double dt) {
    EsaIndexRange r;
    r.h = esa_step_bound(epsilon, alpha_max);
    r.n_lo = static_cast<int>(
        std::ceil((std::log(epsilon) + std::lgamma(1.0 + alpha_max)) / (r.h * alpha_min)));
    r.n_hi = static_cast<int>(std::floor((std::log(horizon / dt) +
                                          std::log(std::log(1.0 / epsilon)) +
                                          std::log(alpha_min) + 0.5) /
                                         r.h));
    return r;
}

/// Compressed-kernel configuration. Immutable once built.
struct ESAParams {
    double epsilon = 0.0;
    double h = 0.0;
    int n_lo = 0;
    int n_hi = 0;
    /// lambda_i = exp(i h), i = n_lo+1 .. n_hi, increasing.
    std::vector<double> exponents;
    double horizon = 0.0;
    /// dt / T, the left end of the certified interval.
    double delta = 0.0;
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    /// Index range produced by the closed-form choice before certification
    /// widened it. Equal to (n_lo, n_hi) when no widening was needed.
    int formula_n_lo = 0;
    int formula_n_hi = 0;

    [[nodiscard]] std::size_t count() const noexcept { return exponents.size(); }
    /// Quadrature index i of position `pos` in `exponents`.
    [[nodiscard]] int index(std::size_t pos) const noexcept {
        return n_lo + 1 + static_cast<int>(pos);
    }
};

/// theta_i(alpha_k) = h exp(alpha_k i h) / Gamma(alpha_k), ordered like
/// params.exponents.
inline std::vector<double> kernel_weights(const ESAParams& params, double alpha_k) {
    if (!(alpha_k >= params.alpha_min && alpha_k <= params.alpha_max)) {
        std::ostringstream os;
        os << "kernel_weights: order " << alpha_k << " outside [" << params.alpha_min << ", "
           << params.alpha_max << "]";
        throw std::domain_error(os.str());
    }
    const double scale = params.h / gamma_eval(alpha_k);
    std::vector<double> w(params.count());
    for (std::size_t p = 0; p < w.size(); ++p)
        w[p] = scale * std::exp(alpha_k * params.index(p) * params.h);
    return w;
}

namespace detail {

inline double kernel_sum(const ESAParams& params, const std::vector<double>& weights, double s) {
    double acc = 0.0;
    for (std::size_t p = 0; p < weights.size(); ++p)
        acc += weights[p] * std::exp(-params.exponents[p] * s);
    return acc;
}

inline double relative_gap(double approx, double alpha, double s) {
    return std::abs(approx * std::pow(s, alpha) - 1.0);
}

inline std::vector<double> alpha_samples(double lo, double hi, int count) {
    std::vector<double> a(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
        a[static_cast<std::size_t>(j)] =
            count == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / (count - 1);
    return a;
}

}  // namespace detail

/// Sum_i theta_i(alpha_k) exp(-lambda_i s) for s in [delta, 1]. Terms whose
/// exponential underflows contribute zero.
inline double approx_kernel(const ESAParams& params, double alpha_k, double s) {
    if (!(s >= params.delta * (1.0 - 1e-14) && s <= 1.0 + 1e-14)) {
        std::ostringstream os;
        os << "approx_kernel: s = " << s << " outside [" << params.delta << ", 1]";
        throw std::domain_error(os.str());
    }
    return detail::kernel_sum(params, kernel_weights(params, alpha_k), s);
}

/// |approx_kernel(s) s^alpha_k - 1|.
inline double kernel_relative_error(const ESAParams& params, double alpha_k, double s) {
    return detail::relative_gap(approx_kernel(params, alpha_k, s), alpha_k, s);
}

/// Number of orders sampled in [alpha_min, alpha_max] when certifying a range.
inline constexpr int kCertifyAlphaSamples = 9;

/// Chooses (h, n_lo, n_hi) for accuracy `epsilon` over the orders of `alpha`
/// and the kernel interval [dt/T, 1].
///
/// Starts from formula_index_range. The closed-form range truncates the sum
/// a few terms short at s = delta (and marginally at s = 1 for small orders),
/// so the range is then widened one index at a time until the relative error
/// at both interval ends is at most epsilon for sampled orders across
/// [alpha_min, alpha_max]. Widening stops with an error beyond
/// max(esa_count_bound, 2 * formula count + 8) terms.
inline ESAParams select_parameters(double epsilon, const VOFunction& alpha, double horizon,
                                   double dt) {
    if (!(epsilon > 0.0 && epsilon <= std::exp(-1.0)))
        throw std::invalid_argument("select_parameters: epsilon must lie in (0, 1/e]");
    if (!(dt > 0.0 && dt < horizon))
        throw std::invalid_argument("select_parameters: need 0 < dt < horizon");

    const double a_lo = alpha.alpha_min();
    const double a_hi = alpha.alpha_max();
    const EsaIndexRange base = formula_index_range(epsilon, a_lo, a_hi, horizon, dt);
    if (base.n_hi <= base.n_lo) {
        std::ostringstream os;
        os << "select_parameters: empty index range (" << base.n_lo << ", " << base.n_hi
           << "]; kernel cannot be compressed at epsilon = " << epsilon;
        throw std::invalid_argument(os.str());
    }

    const double delta = dt / horizon;
    // The count bound is asymptotic and undershoots for coarse epsilon; the
    // floor keeps the loop finite there.
    const double cap = std::max(esa_count_bound(epsilon, a_lo, a_hi, horizon, dt),
                                2.0 * static_cast<double>(base.count()) + 8.0);
    const auto orders = detail::alpha_samples(a_lo, a_hi, kCertifyAlphaSamples);
    const double h = base.h;

    // Running sums at s = delta and s = 1 per sampled order; widening adds
    // one term to each.
    std::vector<double> scale(orders.size()), at_delta(orders.size(), 0.0),
        at_one(orders.size(), 0.0);
    auto add_term = [&](int i) {
        const double lambda = std::exp(i * h);
        for (std::size_t q = 0; q < orders.size(); ++q) {
            const double e = orders[q] * i * h;
            at_delta[q] += scale[q] * std::exp(e - lambda * delta);
            at_one[q] += scale[q] * std::exp(e - lambda);
        }
    };
    for (std::size_t q = 0; q < orders.size(); ++q) scale[q] = h / gamma_eval(orders[q]);
    for (int i = base.n_lo + 1; i <= base.n_hi; ++i) add_term(i);

    auto worst = [&](const std::vector<double>& sums, double s) {
        double w = 0.0;
        for (std::size_t q = 0; q < orders.size(); ++q)
            w = std::max(w, detail::relative_gap(sums[q], orders[q], s));
        return w;
    };

    int lo = base.n_lo;
    int hi = base.n_hi;
    for (;;) {
        const bool short_left = worst(at_delta, delta) > epsilon;
        const bool short_right = worst(at_one, 1.0) > epsilon;
        if (!short_left && !short_right) break;
        if (short_left) add_term(++hi);
        if (short_right) add_term(lo--);
        if (static_cast<double>(hi - lo) > cap) {
            std::ostringstream os;
            os << "select_parameters: cannot certify epsilon = " << epsilon << " within "
               << cap << " exponentials";
            throw std::runtime_error(os.str());
        }
    }

    ESAParams p;
    p.epsilon = epsilon;
    p.h = base.h;
    p.n_lo = lo;
    p.n_hi = hi;
    p.horizon = horizon;
    p.delta = delta;
    p.alpha_min = a_lo;
    p.alpha_max = a_hi;
    p.formula_n_lo = base.n_lo;
    p.formula_n_hi = base.n_hi;
    p.exponents.resize(static_cast<std::size_t>(hi - lo));
    for (std::size_t k = 0; k < p.exponents.size(); ++k)
        p.exponents[k] = std::exp(p.index(k) * p.h);
    return p;
}

}  // namespace fracsum
