#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fracsum/esa_kernel.hpp"
#include "fracsum/gamma.hpp"
#include "fracsum/time_grid.hpp"
#include "fracsum/vo_function.hpp"

using namespace fracsum;

namespace {

VOFunction band(double lo, double hi) {
    return VOFunction::with_bounds(alpha_constant(lo), lo, hi, 1.0, 10);
}

ESAParams hand_params(double h, int lo, int hi) {
    ESAParams p;
    p.epsilon = 1e-3;
    p.h = h;
    p.n_lo = lo;
    p.n_hi = hi;
    p.horizon = 1.0;
    p.delta = 1e-2;
    p.alpha_min = 0.1;
    p.alpha_max = 0.9;
    for (int i = lo + 1; i <= hi; ++i) p.exponents.push_back(std::exp(i * h));
    return p;
}

}  // namespace

TEST(Gamma, FactorialValues) {
    EXPECT_DOUBLE_EQ(gamma_eval(1.0), 1.0);
    EXPECT_DOUBLE_EQ(gamma_eval(2.0), 1.0);
    EXPECT_DOUBLE_EQ(gamma_eval(3.0), 2.0);
}

TEST(Gamma, HalfIntegers) {
    const double rp = std::sqrt(std::numbers::pi);
    EXPECT_NEAR(gamma_eval(0.5), 1.7724538509055160, 1e-12 * rp);
    EXPECT_NEAR(gamma_eval(1.5), rp / 2.0, 1e-12 * rp);
    EXPECT_NEAR(gamma_eval(2.5), 0.75 * rp, 1e-12 * rp);
}

TEST(Gamma, RecurrenceAcrossInterval) {
    for (double x = 0.05; x <= 2.5; x += 0.01)
        EXPECT_NEAR(gamma_eval(x + 1.0), x * gamma_eval(x), 1e-12 * gamma_eval(x + 1.0)) << x;
}

TEST(Gamma, Reflection) {
    for (double x = 0.05; x < 1.0; x += 0.05)
        EXPECT_NEAR(gamma_eval(x) * gamma_eval(1.0 - x), std::numbers::pi / std::sin(std::numbers::pi * x),
                    1e-12 * std::numbers::pi / std::sin(std::numbers::pi * x));
}

TEST(Gamma, RejectsOutsideInterval) {
    EXPECT_THROW(gamma_eval(0.0), std::domain_error);
    EXPECT_THROW(gamma_eval(-0.5), std::domain_error);
    EXPECT_THROW(gamma_eval(3.6), std::domain_error);
    EXPECT_THROW(gamma_eval(std::nan("")), std::domain_error);
    EXPECT_NO_THROW(gamma_eval(1e-4));
    EXPECT_NO_THROW(gamma_eval(3.5));
}

TEST(TimeGrid, NodesAndStep) {
    const TimeGrid g(1.0, 3);
    EXPECT_NEAR(g.dt() * 3.0, 1.0, 1e-14);
    EXPECT_EQ(g.t(0), 0.0);
    EXPECT_EQ(g.t(3), 1.0);
    EXPECT_THROW(TimeGrid(1.0, 0), std::invalid_argument);
    EXPECT_THROW(TimeGrid(-1.0, 4), std::invalid_argument);
}

TEST(VOFunction, GridBoundsSkipOrigin) {
    const TimeGrid g(1.0, 100);
    const auto a = VOFunction::over_grid(alpha_decreasing(), g);
    EXPECT_NEAR(a.alpha_max(), 1.0 - 0.8 * 0.01, 1e-15);
    EXPECT_NEAR(a.alpha_min(), 0.2, 1e-15);
    EXPECT_THROW(static_cast<void>(a.at(0.0)), std::domain_error);
}

TEST(VOFunction, RejectsOrdersOutsideUnitInterval) {
    const TimeGrid g(1.0, 10);
    EXPECT_THROW(VOFunction::over_grid(alpha_constant(1.0), g), std::invalid_argument);
    EXPECT_THROW(VOFunction::over_grid(alpha_linear(0.5, 1.0), g), std::invalid_argument);
    EXPECT_THROW(VOFunction::with_bounds(alpha_constant(0.8), 0.2, 0.7, 1.0), std::domain_error);
}

TEST(Kernel, FormulaTripleAtCornerEps) {
    // h = 2 pi / (log 3 + 0.75 log(1/cos 1) + log 100), closed-form triple.
    const auto r = formula_index_range(1e-2, 0.25, 0.75, 1.0, 0.1);
    EXPECT_NEAR(r.h, 1.0190873303558752, 1e-14);
    EXPECT_EQ(r.n_lo, -18);
    EXPECT_EQ(r.n_hi, 2);
}

TEST(Kernel, SelectionWidensToCertifiedRange) {
    const auto p = select_parameters(1e-2, band(0.25, 0.75), 1.0, 0.1);
    EXPECT_EQ(p.formula_n_lo, -18);
    EXPECT_EQ(p.formula_n_hi, 2);
    EXPECT_EQ(p.n_lo, -19);
    EXPECT_EQ(p.n_hi, 3);
    EXPECT_EQ(p.count(), 22u);
    EXPECT_EQ(p.exponents.size(), p.count());
    for (std::size_t k = 1; k < p.exponents.size(); ++k)
        EXPECT_GT(p.exponents[k], p.exponents[k - 1]);
}

TEST(Kernel, CountsForBenchmarkOrders) {
    const TimeGrid g(1.0, 10000);
    const auto s = select_parameters(1e-8, VOFunction::over_grid(alpha_sin5(), g), 1.0, g.dt());
    EXPECT_EQ(s.formula_n_hi - s.formula_n_lo, 270);
    EXPECT_EQ(s.n_lo, -237);
    EXPECT_EQ(s.n_hi, 38);
    const auto l = select_parameters(1e-8, VOFunction::over_grid(alpha_decreasing(), g), 1.0, g.dt());
    EXPECT_EQ(l.formula_n_hi - l.formula_n_lo, 330);
    EXPECT_EQ(l.n_lo, -298);
    EXPECT_EQ(l.n_hi, 39);
}

TEST(Kernel, SelectionRejectsBadInputs) {
    EXPECT_THROW(select_parameters(2.0, band(0.25, 0.75), 1.0, 0.1), std::invalid_argument);
    EXPECT_THROW(select_parameters(0.0, band(0.25, 0.75), 1.0, 0.1), std::invalid_argument);
    EXPECT_THROW(select_parameters(1e-4, band(0.25, 0.75), 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(select_parameters(1e-4, band(0.25, 0.75), 1.0, -0.1), std::invalid_argument);
    EXPECT_EQ(select_parameters(std::exp(-1.0), band(0.25, 0.75), 1.0, 0.1).count(), 4u);
}

TEST(Kernel, WeightsAtIndexZero) {
    const auto p = hand_params(0.5, -3, 3);
    const auto w = kernel_weights(p, 0.5);
    ASSERT_EQ(p.index(2), 0);
    EXPECT_NEAR(w[2], 0.5 / std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(w[2], 0.2820947918, 1e-10);
}

TEST(Kernel, WeightsPositiveGeometricAndReproducible) {
    const auto p = select_parameters(1e-6, band(0.25, 0.75), 1.0, 1e-3);
    for (double a : {0.25, 0.4, 0.75}) {
        const auto w = kernel_weights(p, a);
        const auto w2 = kernel_weights(p, a);
        EXPECT_EQ(w, w2);
        for (std::size_t k = 0; k < w.size(); ++k) {
            EXPECT_GT(w[k], 0.0);
            if (k > 0) {
                EXPECT_NEAR(w[k] / w[k - 1], std::exp(a * p.h), 1e-13 * std::exp(a * p.h));
            }
        }
    }
    EXPECT_THROW(kernel_weights(p, 0.8), std::domain_error);
}

TEST(Kernel, TwoSidedBoundAcrossInterval) {
    for (double eps : {1e-4, 1e-6, 1e-8}) {
        const auto p = select_parameters(eps, band(0.25, 0.75), 1.0, 1e-4);
        for (int q = 0; q < 9; ++q) {
            const double a = 0.25 + 0.5 * q / 8.0;
            double prev = INFINITY;
            for (int i = 0; i < 50; ++i) {
                const double s = i == 49 ? 1.0 : std::exp(std::log(1e-4) * (1.0 - i / 49.0));
                const double v = approx_kernel(p, a, s);
                const double exact = std::pow(s, -a);
                EXPECT_LE(v, (1.0 + eps) * exact) << eps << ' ' << a << ' ' << s;
                EXPECT_GE(v, (1.0 - eps) * exact) << eps << ' ' << a << ' ' << s;
                EXPECT_LT(v, prev);
                prev = v;
            }
        }
    }
}

TEST(Kernel, ApproxRejectsPointsOutsideInterval) {
    const auto p = select_parameters(1e-4, band(0.25, 0.75), 1.0, 1e-2);
    EXPECT_THROW(approx_kernel(p, 0.5, 1e-3), std::domain_error);
    EXPECT_THROW(approx_kernel(p, 0.5, 1.5), std::domain_error);
}

TEST(Kernel, CountGrowsLikeLogSquared) {
    const auto a = band(0.25, 0.75);
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        const double dt = 1.0 / n;
        const auto p = select_parameters(dt * dt, a, 1.0, dt);
        EXPECT_LE(static_cast<double>(p.count()), esa_count_bound(dt * dt, 0.25, 0.75, 1.0, dt)) << n;
        const double l = std::log(n);
        EXPECT_LT(static_cast<double>(p.count()) / (l * l), 3.5) << n;
    }
}

TEST(Kernel, ShortHorizonAccepted) {
    const auto p = select_parameters(1e-6, band(0.3, 0.6), 0.5, 1e-3);
    EXPECT_NEAR(p.delta, 2e-3, 1e-16);
    EXPECT_LE(kernel_relative_error(p, 0.45, p.delta), 1e-6);
}
