#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fracsum/caputo_oracle.hpp"
#include "fracsum/fractional_ode.hpp"
#include "fracsum/table_io.hpp"
#include "fracsum/verification.hpp"

using namespace fracsum;

namespace {

// max over random (x, t) of |D^a u - u_xx - f| with D^a u from the quadrature oracle
double residual(const ManufacturedProblem& p, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> X(0.0, p.x_right), T(1e-3, p.horizon);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = X(rng);
        const double t = T(rng);
        const double d = caputo_oracle([&](double s) { return p.exact_dt(x, s); }, p.alpha.fn(t), t);
        worst = std::max(worst, std::abs(d - p.exact_dxx(x, t) - p.source(x, t)));
    }
    return worst;
}

double err_of(const ManufacturedProblem& p, Scheme s, std::size_t n, std::size_t m) {
    if (p.kind == ProblemKind::Ode) {
        const auto ode = p.instantiate_ode(n);
        const double eps = ode.time.dt() * ode.time.dt();
        return max_error(s == Scheme::L1 ? march_l1(ode) : march_fast(ode, eps), p.horizon, p.exact);
    }
    const auto pde = p.instantiate(n, m);
    const double eps = pde.time.dt() * pde.time.dt();
    const auto sol = s == Scheme::L1 ? solve_l1(pde) : solve_fast_esa(pde, eps);
    return max_error(sol, pde.space, p.horizon, p.exact);
}

}  // namespace

TEST(Problems, PointValues) {
    const auto e1 = example1();
    EXPECT_EQ(e1.exact(0.0, 1.0), 1.0);
    EXPECT_EQ(e1.initial(0.0), 0.0);
    const auto e2 = example2();
    EXPECT_DOUBLE_EQ(e2.initial(0.5), 1.25);
    EXPECT_DOUBLE_EQ(e2.exact(0.5, 1.0), 5.0);
    EXPECT_EQ(e2.exact(0.0, 0.7), 0.0);
    EXPECT_EQ(e2.exact(1.0, 0.7), 0.0);
    EXPECT_THROW(e1.instantiate(10, 10), std::logic_error);
    EXPECT_THROW(e2.instantiate_ode(10), std::logic_error);
}

TEST(Problems, ResidualAgainstOracle) {
    for (auto preset : {alpha_preset_sin5(), alpha_preset_linear()}) {
        EXPECT_LE(residual(example2(preset), 20, 11), 1e-10) << preset.name;
        EXPECT_LE(residual(example_sine(preset), 20, 12), 1e-10) << preset.name;
        EXPECT_LE(residual(example1(preset), 20, 13), 1e-10) << preset.name;
    }
}

TEST(MaxError, SelfAndPerturbation) {
    const auto p = example2();
    const SpatialGrid space(1.0, 10);
    Solution s;
    s.final_field.resize(11);
    for (std::size_t j = 0; j <= 10; ++j) s.final_field[j] = p.exact(space.x(j), 1.0);
    EXPECT_EQ(max_error(s, space, 1.0, p.exact), 0.0);
    s.final_field[4] += 1e-3;
    EXPECT_NEAR(max_error(s, space, 1.0, p.exact), 1e-3, 1e-15);
    s.final_field.pop_back();
    EXPECT_THROW(max_error(s, space, 1.0, p.exact), std::invalid_argument);
}

TEST(Orders, GeometricSequenceGivesExactRate) {
    for (double pr : {0.5, 1.0, 1.32, 2.0}) {
        for (int r = 1; r < 6; ++r) {
            const double a = 3.7 * std::exp2(-pr * (r - 1));
            const double b = 3.7 * std::exp2(-pr * r);
            EXPECT_NEAR(*observed_order(a, b), pr, 1e-12);
        }
    }
    EXPECT_NEAR(*observed_order(9.0, 1.0, 3.0), 2.0, 1e-12);
    EXPECT_FALSE(observed_order(0.0, 0.0));
    EXPECT_FALSE(observed_order(1.0, std::nan("")));
}

TEST(Orders, AssignSkipsFailedAndForeignRows) {
    std::vector<ConvergenceRow> rows(5);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].scheme = r < 4 ? "l1" : "fast";
        rows[r].alpha = "sin5";
        rows[r].n = 100u << r;
        rows[r].err = std::exp2(-double(r));
    }
    rows[2].ok = false;
    assign_orders(rows);
    EXPECT_FALSE(rows[0].order);
    EXPECT_NEAR(*rows[1].order, 1.0, 1e-12);
    EXPECT_FALSE(rows[2].order);
    EXPECT_FALSE(rows[3].order);
    EXPECT_FALSE(rows[4].order);
}

TEST(Study, ZeroProblemHasZeroErrorAndNoOrders) {
    const auto t = refinement_study(example_zero(), {Scheme::L1, Scheme::Fast},
                                    {{50, 10, {}}, {100, 10, {}}, {200, 10, {}}}, {1, 0});
    ASSERT_EQ(t.rows.size(), 6u);
    for (const auto& r : t.rows) {
        EXPECT_TRUE(r.ok);
        EXPECT_EQ(r.err, 0.0);
        EXPECT_FALSE(r.order);
    }
}

TEST(Study, FailedRowIsFlagged) {
    const auto t = refinement_study(example2(), {Scheme::Fast}, {{50, 10, {}}, {100, 10, 5.0}},
                                    {1, 0});
    EXPECT_TRUE(t.rows[0].ok);
    EXPECT_FALSE(t.rows[1].ok);
    EXPECT_FALSE(t.rows[1].message.empty());
    EXPECT_FALSE(t.rows[1].order);
}

TEST(Study, SmallScaleSchemesAgree) {
    for (auto preset : {alpha_preset_sin5(), alpha_preset_linear()}) {
        const auto t = refinement_study(example2(preset), {Scheme::L1, Scheme::Fast},
                                        {{100, 50, {}}, {200, 50, {}}, {400, 50, {}}}, {1, 0});
        for (std::size_t r = 0; r < 3; ++r) {
            const auto& a = t.rows[r];
            const auto& b = t.rows[r + 3];
            ASSERT_EQ(a.n, b.n);
            EXPECT_LE(std::abs(a.err - b.err), 2.0 * b.epsilon) << preset.name << ' ' << a.n;
        }
    }
}

TEST(Study, DeterministicApartFromTimings) {
    const std::vector<ScheduleEntry> sched{{64, 16, {}}, {128, 16, {}}};
    auto a = refinement_study(example2(), {Scheme::L1, Scheme::Fast}, sched, {1, 0});
    auto b = refinement_study(example2(), {Scheme::L1, Scheme::Fast}, sched, {1, 2});
    for (auto* t : {&a, &b})
        for (auto& r : t->rows) r.seconds = 0.0;
    std::ostringstream sa, sb;
    write_table_csv(sa, a);
    write_table_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
}

TEST(Study, FastAndL1ErrorsClose) {
    for (auto preset : {alpha_preset_sin5(), alpha_preset_linear()}) {
        const double o1 = err_of(example1(preset), Scheme::L1, 4000, 0);
        const double o2 = err_of(example1(preset), Scheme::Fast, 4000, 0);
        EXPECT_LE(std::max(o1, o2) / std::min(o1, o2), 1.5) << preset.name;
        const double p1 = err_of(example2(preset), Scheme::L1, 2000, 100);
        const double p2 = err_of(example2(preset), Scheme::Fast, 2000, 100);
        EXPECT_LE(std::max(p1, p2) / std::min(p1, p2), 1.5) << preset.name;
    }
}

TEST(Study, StorageRatioFallsWithN) {
    const auto t = refinement_study(example2(), {Scheme::L1, Scheme::Fast},
                                    {{250, 20, {}}, {500, 20, {}}, {1000, 20, {}}, {2000, 20, {}}},
                                    {1, 0});
    double prev = INFINITY;
    for (std::size_t r = 0; r < 4; ++r) {
        const double ratio = double(t.rows[r + 4].aux_scalars) / double(t.rows[r].aux_scalars);
        EXPECT_LT(ratio, prev) << t.rows[r].n;
        prev = ratio;
    }
}

TEST(Example1, L1MarchMatchesReference) {
    // final-time errors from an independent numpy march of the same scheme
    const double sin5 = err_of(example1(alpha_preset_sin5()), Scheme::L1, 10000, 0);
    EXPECT_NEAR(sin5, 7.431683601843986e-07, 1e-6 * 7.43e-7);
    const double lin = err_of(example1(alpha_preset_linear()), Scheme::L1, 10000, 0);
    EXPECT_NEAR(lin, 2.5369558109833434e-06, 1e-6 * 2.54e-6);
}

TEST(Example1, L1LinearAtTwentyThousand) {
    const double e = err_of(example1(alpha_preset_linear()), Scheme::L1, 20000, 0);
    EXPECT_GT(e, 1.1831e-6 / 2.0);
    EXPECT_LT(e, 1.1831e-6 * 2.0);
}

TEST(Example1, FastMarchTrajectory) {
    const auto ode = example1().instantiate_ode(200);
    const auto a = march_fast(ode, 1e-10, true);
    const auto b = march_l1(ode, true);
    ASSERT_EQ(a.trajectory.size(), 201u);
    EXPECT_EQ(a.trajectory[1], b.trajectory[1]);
    for (std::size_t k = 0; k <= 200; ++k) EXPECT_NEAR(a.trajectory[k], b.trajectory[k], 1e-9);
    EXPECT_EQ(a.aux_scalars, a.n_eps() + 2);
    EXPECT_EQ(b.aux_scalars, 201u);
}

TEST(SpatialOrder, SineProblemIsSecondOrder) {
    const auto p = example_sine();
    std::vector<double> errs;
    for (std::size_t m : {25, 50, 100, 200}) {
        const auto pde = p.instantiate(4000, m);
        const auto sol = solve_fast_esa(pde, pde.time.dt() * pde.time.dt());
        errs.push_back(max_error(sol, pde.space, p.horizon, p.exact));
    }
    for (std::size_t r = 1; r < errs.size(); ++r)
        EXPECT_NEAR(std::log2(errs[r - 1] / errs[r]), 2.0, 0.1) << r;
}

TEST(TableIo, CsvAndMarkdownLayout) {
    const auto t = refinement_study(example1(), {Scheme::L1, Scheme::Fast},
                                    {{100, 0, {}}, {200, 0, {}}}, {1, 0});
    std::ostringstream csv, md;
    write_table_csv(csv, t);
    write_table_markdown(md, t);
    std::istringstream is(csv.str());
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "scheme,alpha,n,m,epsilon,err,order,seconds,aux_scalars,n_eps");
    std::getline(is, line);
    EXPECT_EQ(line.rfind("l1,sin5,100,0,,", 0), 0u) << line;
    EXPECT_NE(line.find(",,"), std::string::npos);
    std::getline(is, line);
    std::getline(is, line);
    EXPECT_EQ(line.rfind("fast,sin5,100,0,1.000000e-04,", 0), 0u) << line;
    EXPECT_NE(md.str().find("| alpha(t) | n | m | L1 Err |"), std::string::npos);
    EXPECT_NE(md.str().find("| sin5 | 100 | 0 |"), std::string::npos);
}

TEST(Doubling, Chain) {
    EXPECT_EQ(doubling_chain(100, 800), (std::vector<std::size_t>{100, 200, 400, 800}));
    EXPECT_EQ(doubling_chain(5, 5), (std::vector<std::size_t>{5}));
    EXPECT_THROW(doubling_chain(10, 5), std::invalid_argument);
}
