#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "fracsum/time_grid.hpp"

namespace fracsum {

/// Variable order α(t) together with certified bounds α_min <= α(t) <= α_max,
/// both strictly inside (0, 1).
///
/// Bounds refer to the times at which the evaluators actually sample the
/// order, i.e. grid nodes t_k with k >= 1. A function such as 1 - 0.8t is
/// admissible although α(0) = 1.
class VOFunction {
public:
    using Fn = std::function<double(double)>;

    /// Bounds are taken as the extrema of `fn` over the nodes t_1..t_n.
    static VOFunction over_grid(Fn fn, const TimeGrid& grid) {
        double lo = fn(grid.t(1));
        double hi = lo;
        for (std::size_t k = 2; k <= grid.steps(); ++k) {
            const double a = fn(grid.t(k));
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        return VOFunction(std::move(fn), lo, hi);
    }

    /// Explicit bounds, validated by sampling `samples` points of (0, horizon].
    static VOFunction with_bounds(Fn fn, double alpha_min, double alpha_max, double horizon,
                                  std::size_t samples = 1000) {
        VOFunction v(std::move(fn), alpha_min, alpha_max);
        for (std::size_t s = 1; s <= samples; ++s) {
            const double t = horizon * static_cast<double>(s) / static_cast<double>(samples);
            static_cast<void>(v.at(t));
        }
        return v;
    }

    /// α(t), checked against the certified bounds.
    [[nodiscard]] double at(double t) const {
        const double a = fn_(t);
        if (!(a >= lo_ && a <= hi_)) {
            std::ostringstream os;
            os << "VOFunction: alpha(" << t << ") = " << a << " outside [" << lo_ << ", " << hi_
               << "]";
            throw std::domain_error(os.str());
        }
        return a;
    }
    [[nodiscard]] double operator()(double t) const { return at(t); }

    [[nodiscard]] double alpha_min() const noexcept { return lo_; }
    [[nodiscard]] double alpha_max() const noexcept { return hi_; }
    [[nodiscard]] const Fn& function() const noexcept { return fn_; }

    /// Throws unless alpha_min <= a <= alpha_max.
    void require_in_bounds(double a) const {
        if (!(a >= lo_ && a <= hi_)) {
            std::ostringstream os;
            os << "order " << a << " outside certified bounds [" << lo_ << ", " << hi_ << "]";
            throw std::domain_error(os.str());
        }
    }

private:
    VOFunction(Fn fn, double lo, double hi) : fn_(std::move(fn)), lo_(lo), hi_(hi) {
        if (!fn_) throw std::invalid_argument("VOFunction: empty function");
        if (!(lo > 0.0 && lo <= hi && hi < 1.0)) {
            std::ostringstream os;
            os << "VOFunction: bounds [" << lo << ", " << hi << "] must satisfy 0 < lo <= hi < 1";
            throw std::invalid_argument(os.str());
        }
    }

    Fn fn_;
    double lo_;
    double hi_;
};

/// (a + sin(b t)) / c; the preset `sin5` is (2 + sin 5t)/4.
inline VOFunction::Fn alpha_sine(double a, double b, double c) {
    if (c == 0.0) throw std::invalid_argument("alpha_sine: c must be nonzero");
    return [a, b, c](double t) { return (a + std::sin(b * t)) / c; };
}

/// a - b t; the preset `linear` is 1 - 0.8t.
inline VOFunction::Fn alpha_linear(double a, double b) {
    return [a, b](double t) { return a - b * t; };
}

inline VOFunction::Fn alpha_sin5() { return alpha_sine(2.0, 5.0, 4.0); }
inline VOFunction::Fn alpha_decreasing() { return alpha_linear(1.0, 0.8); }

/// Constant order, mostly for tests.
inline VOFunction::Fn alpha_constant(double a) {
    return [a](double) { return a; };
}

/// Named order function as used by the CLI and the benchmark tables.
struct AlphaPreset {
    std::string name;
    VOFunction::Fn fn;
};

}  // namespace fracsum
