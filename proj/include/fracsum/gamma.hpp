#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fracsum {

/// Supported arguments are (0, kGammaMaxArg]. This covers Γ(α), Γ(1-α),
/// Γ(2-α), Γ(1+α) and Γ(3-α) for every order α in (0, 1); Γ(1-α) approaches
/// the pole at 0 for orders such as 1 - 0.8t near t = 0.
inline constexpr double kGammaMaxArg = 3.5;

/// Γ(x) for 0 < x <= 3.5, relative error below 1e-12.
///
/// Backed by the C library's tgamma, which is accurate to a few ulp on this
/// interval. Every Γ in the library goes through here so that the L1 and fast
/// evaluators share one code path.
inline double gamma_eval(double x) {
    if (!(x > 0.0 && x <= kGammaMaxArg)) {
        std::ostringstream os;
        os << "gamma_eval: argument " << x << " outside (0, " << kGammaMaxArg << "]";
        throw std::domain_error(os.str());
    }
    return std::tgamma(x);
}

}  // namespace fracsum
