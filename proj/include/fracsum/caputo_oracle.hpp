#pragma once

// Reference value of the continuous variable-order Caputo derivative
//
//     D u(t) = 1/Gamma(1 - a(t)) int_0^t u'(tau) (t - tau)^(-a(t)) dtau
//
// by tanh-sinh quadrature. The order is frozen at the outer time
// t. Substituting t - tau = sigma^(1/(1-a)) removes the endpoint singularity:
//
//     D u(t) = 1/Gamma(2 - a) int_0^{t^(1-a)} u'(t - sigma^(1/(1-a))) dsigma.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracsum/gamma.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

inline constexpr double kOracleAbsTolerance = 1e-12;

/// Caputo derivative of order `order` at t > 0, given u' analytically.
/// Throws std::runtime_error when the error estimate exceeds `abs_tol`.
inline double caputo_oracle(const std::function<double(double)>& u_prime, double order, double t,
                            double abs_tol = kOracleAbsTolerance) {
    if (!(t > 0.0)) throw std::invalid_argument("caputo_oracle: need t > 0");
    if (!(order > 0.0 && order < 1.0))
        throw std::invalid_argument("caputo_oracle: order must lie in (0, 1)");

    const double expo = 1.0 / (1.0 - order);
    const double upper = std::pow(t, 1.0 - order);
    auto integrand = [&](double sigma) {
        const double tau = std::max(0.0, t - std::pow(sigma, expo));
        return u_prime(tau);
    };

    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    const double g = gamma_eval(2.0 - order);
    double err = 0.0;
    double l1 = 0.0;
    const double value = rule.integrate(integrand, 0.0, upper, 1e-14, &err, &l1);
    if (!(err / g <= abs_tol)) {
        std::ostringstream os;
        os << "caputo_oracle: quadrature error estimate " << err / g << " above " << abs_tol
           << " at t = " << t;
        throw std::runtime_error(os.str());
    }
    return value / g;
}

inline double caputo_oracle(const std::function<double(double)>& u_prime, const VOFunction& alpha,
                            double t, double abs_tol = kOracleAbsTolerance) {
    return caputo_oracle(u_prime, alpha.at(t), t, abs_tol);
}

}  // namespace fracsum
