#pragma once

// Manufactured problems with known solutions, error metrics and refinement
// studies that tabulate error, observed temporal order, run time and memory.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsum/diffusion_solver.hpp"
#include "fracsum/fractional_ode.hpp"
#include "fracsum/gamma.hpp"
#include "fracsum/vo_function.hpp"

namespace fracsum {

enum class ProblemKind { Ode, Pde };

using FieldFn = std::function<double(double x, double t)>;

/// A problem whose exact solution is known. For ODE problems the spatial
/// argument of every handle is ignored.
struct ManufacturedProblem {
    std::string name;
    ProblemKind kind = ProblemKind::Pde;
    AlphaPreset alpha;
    double horizon = 1.0;
    double x_right = 1.0;
    SourceFn source;
    InitialFn initial;
    FieldFn exact;
    /// du/dt, used by the quadrature oracle.
    FieldFn exact_dt;
    /// d2u/dx2 (zero for ODE problems).
    FieldFn exact_dxx;

    /// Order function with bounds taken over the nodes of `grid`.
    [[nodiscard]] VOFunction order_on(const TimeGrid& grid) const {
        return VOFunction::over_grid(alpha.fn, grid);
    }

    [[nodiscard]] DiffusionProblem instantiate(std::size_t n, std::size_t m) const {
        if (kind != ProblemKind::Pde) throw std::logic_error(name + " is not a diffusion problem");
        const TimeGrid time(horizon, n);
        return DiffusionProblem{SpatialGrid(x_right, m), time, order_on(time), source, initial};
    }

    [[nodiscard]] FractionalOde instantiate_ode(std::size_t n) const {
        if (kind != ProblemKind::Ode) throw std::logic_error(name + " is not a scalar problem");
        const TimeGrid time(horizon, n);
        auto g = source;
        return FractionalOde{time, order_on(time), [g](double t) { return g(0.0, t); },
                             initial(0.0)};
    }
};

namespace detail {

// t^p / Gamma(1 + p) for the Caputo derivative of t^p; zero at t = 0.
inline double power_rate(double t, double p) {
    return t > 0.0 ? std::pow(t, p) / gamma_eval(1.0 + p) : 0.0;
}

}  // namespace detail

inline AlphaPreset alpha_preset_sin5() { return {"sin5", alpha_sin5()}; }
inline AlphaPreset alpha_preset_linear() { return {"linear", alpha_decreasing()}; }

/// D^{a(t)} u = 2 t^{2-a(t)} / Gamma(3-a(t)) on [0, 1], u(0) = 0; exact u = t^2.
inline ManufacturedProblem example1(AlphaPreset alpha = alpha_preset_sin5()) {
    ManufacturedProblem p;
    p.name = "example1";
    p.kind = ProblemKind::Ode;
    const auto a = alpha.fn;
    p.alpha = std::move(alpha);
    p.source = [a](double, double t) { return 2.0 * detail::power_rate(t, 2.0 - a(t)); };
    p.initial = [](double) { return 0.0; };
    p.exact = [](double, double t) { return t * t; };
    p.exact_dt = [](double, double t) { return 2.0 * t; };
    p.exact_dxx = [](double, double) { return 0.0; };
    return p;
}

/// Diffusion problem on [0,1] x [0,1] with exact solution 10 x^2 (1-x) (t+1)^2:
///   f = 20 x^2 (1-x) (t^{2-a}/Gamma(3-a) + t^{1-a}/Gamma(2-a)) - 20 (t+1)^2 (1-3x),
///   phi = 10 x^2 (1-x).
inline ManufacturedProblem example2(AlphaPreset alpha = alpha_preset_sin5()) {
    ManufacturedProblem p;
    p.name = "example2";
    p.kind = ProblemKind::Pde;
    const auto a = alpha.fn;
    p.alpha = std::move(alpha);
    p.source = [a](double x, double t) {
        const double at = a(t);
        return 20.0 * x * x * (1.0 - x) *
                   (detail::power_rate(t, 2.0 - at) + detail::power_rate(t, 1.0 - at)) -
               20.0 * (t + 1.0) * (t + 1.0) * (1.0 - 3.0 * x);
    };
    p.initial = [](double x) { return 10.0 * x * x * (1.0 - x); };
    p.exact = [](double x, double t) { return 10.0 * x * x * (1.0 - x) * (t + 1.0) * (t + 1.0); };
    p.exact_dt = [](double x, double t) { return 20.0 * x * x * (1.0 - x) * (t + 1.0); };
    p.exact_dxx = [](double x, double t) { return 20.0 * (t + 1.0) * (t + 1.0) * (1.0 - 3.0 * x); };
    return p;
}

/// Diffusion problem with exact solution sin(pi x) (t+1)^2. Unlike example2
/// (cubic in x, reproduced exactly by the three-point Laplacian) it carries a
/// genuine O(dx^2) spatial error.
inline ManufacturedProblem example_sine(AlphaPreset alpha = alpha_preset_sin5()) {
    constexpr double pi = std::numbers::pi;
    ManufacturedProblem p;
    p.name = "sine";
    p.kind = ProblemKind::Pde;
    const auto a = alpha.fn;
    p.alpha = std::move(alpha);
    p.source = [a](double x, double t) {
        const double at = a(t);
        const double sx = std::sin(pi * x);
        return sx * (2.0 * detail::power_rate(t, 2.0 - at) + 2.0 * detail::power_rate(t, 1.0 - at) +
                     pi * pi * (t + 1.0) * (t + 1.0));
    };
    p.initial = [](double x) { return std::sin(pi * x); };
    p.exact = [](double x, double t) { return std::sin(pi * x) * (t + 1.0) * (t + 1.0); };
    p.exact_dt = [](double x, double t) { return 2.0 * std::sin(pi * x) * (t + 1.0); };
    p.exact_dxx = [](double x, double t) {
        return -pi * pi * std::sin(pi * x) * (t + 1.0) * (t + 1.0);
    };
    return p;
}

/// f = 0, phi = 0, u = 0.
inline ManufacturedProblem example_zero(AlphaPreset alpha = alpha_preset_sin5()) {
    ManufacturedProblem p;
    p.name = "zero";
    p.kind = ProblemKind::Pde;
    p.alpha = std::move(alpha);
    p.source = [](double, double) { return 0.0; };
    p.initial = [](double) { return 0.0; };
    p.exact = [](double, double) { return 0.0; };
    p.exact_dt = [](double, double) { return 0.0; };
    p.exact_dxx = [](double, double) { return 0.0; };
    return p;
}

/// Err = max_j |u(x_j, T) - u_j^n| over interior nodes.
inline double max_error(const Solution& solution, const SpatialGrid& space, double horizon,
                        const FieldFn& exact) {
    const auto& u = solution.final_field;
    if (u.size() != space.cells() + 1)
        throw std::invalid_argument("max_error: field does not match the grid");
    double err = 0.0;
    for (std::size_t j = 1; j < space.cells(); ++j)
        err = std::max(err, std::abs(exact(space.x(j), horizon) - u[j]));
    return err;
}

/// Err = |u(T) - u_n| for a scalar problem.
inline double max_error(const OdeSolution& solution, double horizon, const FieldFn& exact) {
    return std::abs(exact(0.0, horizon) - solution.final_value);
}

/// log2(err_coarse / err_fine) for a halved step; the general
/// log(err ratio)/log(step ratio) otherwise. Empty when either error is not
/// a positive finite number.
inline std::optional<double> observed_order(double err_coarse, double err_fine, double refinement = 2.0) {
    if (!(err_coarse > 0.0 && err_fine > 0.0) || !std::isfinite(err_coarse) ||
        !std::isfinite(err_fine))
        return std::nullopt;
    if (refinement == 2.0) return std::log2(err_coarse / err_fine);
    return std::log(err_coarse / err_fine) / std::log(refinement);
}

enum class Scheme { L1, Fast };

inline const char* scheme_name(Scheme s) { return s == Scheme::L1 ? "l1" : "fast"; }

/// One refinement level; epsilon empty means the dt^2 rule.
struct ScheduleEntry {
    std::size_t n = 0;
    std::size_t m = 0;
    std::optional<double> epsilon;
};

struct ConvergenceRow {
    std::string scheme;
    std::string alpha;
    std::size_t n = 0;
    std::size_t m = 0;
    double epsilon = 0.0;  // 0 for the L1 scheme
    double err = 0.0;
    std::optional<double> order;
    double seconds = 0.0;
    std::size_t aux_scalars = 0;
    std::size_t n_eps = 0;
    bool ok = true;
    std::string message;
};

struct ConvergenceTable {
    std::string problem;
    std::vector<ConvergenceRow> rows;
};

struct StudyOptions {
    /// Median of this many timed runs per row.
    std::size_t timing_repeats = 3;
    unsigned threads = 0;
};

/// Fills the order column of consecutive successful rows of one scheme/order function.
inline void assign_orders(std::vector<ConvergenceRow>& rows) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r].order.reset();
        if (r == 0 || !rows[r].ok) continue;
        const auto& prev = rows[r - 1];
        if (!prev.ok || prev.scheme != rows[r].scheme || prev.alpha != rows[r].alpha ||
            prev.m != rows[r].m || prev.n == 0)
            continue;
        rows[r].order = observed_order(prev.err, rows[r].err,
                                       static_cast<double>(rows[r].n) / static_cast<double>(prev.n));
    }
}

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

inline ConvergenceRow run_row(const ManufacturedProblem& problem, Scheme scheme,
                              const ScheduleEntry& entry, const StudyOptions& options) {
    ConvergenceRow row;
    row.scheme = scheme_name(scheme);
    row.alpha = problem.alpha.name;
    row.n = entry.n;
    row.m = problem.kind == ProblemKind::Pde ? entry.m : 0;
    try {
        const TimeGrid grid(problem.horizon, entry.n);
        const double eps = entry.epsilon.value_or(grid.dt() * grid.dt());
        row.epsilon = scheme == Scheme::Fast ? eps : 0.0;
        std::vector<double> times;
        const std::size_t repeats = std::max<std::size_t>(1, options.timing_repeats);
        for (std::size_t rep = 0; rep < repeats; ++rep) {
            if (problem.kind == ProblemKind::Ode) {
                const auto ode = problem.instantiate_ode(entry.n);
                const auto sol = scheme == Scheme::L1 ? march_l1(ode) : march_fast(ode, eps);
                row.err = max_error(sol, problem.horizon, problem.exact);
                row.aux_scalars = sol.aux_scalars;
                row.n_eps = sol.n_eps();
                times.push_back(sol.seconds);
            } else {
                const auto pde = problem.instantiate(entry.n, entry.m);
                const SolverOptions so{options.threads, 0};
                const auto sol =
                    scheme == Scheme::L1 ? solve_l1(pde, so) : solve_fast_esa(pde, eps, so);
                row.err = max_error(sol, pde.space, problem.horizon, problem.exact);
                row.aux_scalars = sol.aux_scalars;
                row.n_eps = sol.n_eps();
                times.push_back(sol.seconds);
            }
        }
        row.seconds = median(std::move(times));
    } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
    }
    return row;
}

}  // namespace detail

/// Runs `schemes` over `schedule` (rows of each scheme kept together, in
/// schedule order) and fills the order column. A failing solve marks its row
/// and leaves the neighbouring orders empty.
inline ConvergenceTable refinement_study(const ManufacturedProblem& problem,
                                         const std::vector<Scheme>& schemes,
                                         const std::vector<ScheduleEntry>& schedule,
                                         const StudyOptions& options = {}) {
    ConvergenceTable table;
    table.problem = problem.name;
    for (Scheme s : schemes)
        for (const auto& entry : schedule)
            table.rows.push_back(detail::run_row(problem, s, entry, options));
    assign_orders(table.rows);
    return table;
}

/// Doubling chain first, 2 first, ..., up to and including last.
inline std::vector<std::size_t> doubling_chain(std::size_t first, std::size_t last) {
    if (first == 0 || last < first) throw std::invalid_argument("doubling_chain: need 0 < first <= last");
    std::vector<std::size_t> v;
    for (std::size_t n = first; n <= last; n *= 2) v.push_back(n);
    return v;
}

}  // namespace fracsum
