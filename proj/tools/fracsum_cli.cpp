// fracsum_cli: kernel checks, derivative and PDE refinement studies, solves.
//
// Exit status: 0 success, 1 a bound or order check failed, 2 invalid input.
// Every failure prints one line starting with "error:" to stderr.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracsum/fracsum.hpp"

namespace fs = std::filesystem;
using namespace fracsum;

namespace {

struct Invalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Invalid("bad number '" + item + "' in '" + text + "'");
        }
    }
    return v;
}

// sin5 | linear | custom:linear:a,b (a - b t) | custom:sin:a,b,c ((a + sin(b t))/c)
AlphaPreset parse_alpha(const std::string& text) {
    if (text == "sin5") return alpha_preset_sin5();
    if (text == "linear") return alpha_preset_linear();
    const std::string lin = "custom:linear:";
    const std::string sine = "custom:sin:";
    if (text.rfind(lin, 0) == 0) {
        const auto c = parse_numbers(text.substr(lin.size()));
        if (c.size() != 2) throw Invalid("custom:linear needs a,b");
        return {text, alpha_linear(c[0], c[1])};
    }
    if (text.rfind(sine, 0) == 0) {
        const auto c = parse_numbers(text.substr(sine.size()));
        if (c.size() != 3 || c[2] == 0.0) throw Invalid("custom:sin needs a,b,c with c != 0");
        return {text, alpha_sine(c[0], c[1], c[2])};
    }
    throw Invalid("unknown alpha '" + text + "' (sin5, linear, custom:linear:a,b, custom:sin:a,b,c)");
}

// "N" or "first:last" (doubling chain).
std::vector<std::size_t> parse_steps(const std::string& text) {
    auto one = [&](const std::string& s) -> std::size_t {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size() || v < 1) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw Invalid("bad step count '" + s + "'");
        }
    };
    const auto colon = text.find(':');
    if (colon == std::string::npos) return {one(text)};
    const std::size_t first = one(text.substr(0, colon));
    const std::size_t last = one(text.substr(colon + 1));
    if (last < first) throw Invalid("step range '" + text + "' is decreasing");
    return doubling_chain(first, last);
}

// "dt2" -> empty (eps = dt^2), else an explicit value in (0, 1/e].
std::optional<double> parse_eps(const std::string& text) {
    if (text == "dt2") return std::nullopt;
    const auto v = parse_numbers(text);
    if (v.size() != 1) throw Invalid("bad epsilon '" + text + "'");
    if (!(v[0] > 0.0 && v[0] <= std::exp(-1.0)))
        throw Invalid("epsilon " + text + " outside (0, 1/e]");
    return v[0];
}

std::vector<Scheme> parse_schemes(const std::string& text) {
    if (text == "l1") return {Scheme::L1};
    if (text == "fast") return {Scheme::Fast};
    if (text == "both") return {Scheme::L1, Scheme::Fast};
    throw Invalid("unknown scheme '" + text + "' (l1, fast, both)");
}

ManufacturedProblem make_problem(const std::string& name, const AlphaPreset& alpha, double horizon,
                                 double x_right) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw Invalid("--T must be positive");
    if (!(x_right > 0.0) || !std::isfinite(x_right)) throw Invalid("--xr must be positive");
    ManufacturedProblem p;
    if (name == "example2") p = example2(alpha);
    else if (name == "sine") p = example_sine(alpha);
    else if (name == "zero") p = example_zero(alpha);
    else throw Invalid("unknown problem '" + name + "' (example2, sine, zero)");
    if (name != "zero" && x_right != 1.0)
        throw Invalid("problem " + name + " vanishes at x = 0 and x = 1 only; use --xr 1");
    p.horizon = horizon;
    p.x_right = x_right;
    return p;
}

void require_format(const std::string& f) {
    if (f != "csv" && f != "md") throw Invalid("unknown format '" + f + "' (csv, md)");
}

// Writes via `emit` to `path`, or stdout when path is empty.
template <class Emit>
void write_to(const std::string& path, Emit emit) {
    if (path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    emit(os);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

struct KernelConfig {
    double eps = 1e-8;
    double alpha_min = 0.25;
    double alpha_max = 0.75;
    double dt = 1e-4;
    double horizon = 1.0;
    int points = 50;
    int orders = kCertifyAlphaSamples;
    std::string out;
    std::string format = "csv";
};

int cmd_kernel_check(const KernelConfig& c) {
    require_format(c.format);
    if (!(c.eps > 0.0 && c.eps <= std::exp(-1.0))) throw Invalid("--eps must lie in (0, 1/e]");
    if (!(c.alpha_min > 0.0 && c.alpha_min <= c.alpha_max && c.alpha_max < 1.0))
        throw Invalid("need 0 < alpha-min <= alpha-max < 1");
    if (!(c.horizon > 0.0 && c.dt > 0.0 && c.dt < c.horizon)) throw Invalid("need 0 < dt < T");
    if (c.points < 2 || c.orders < 1) throw Invalid("need --points >= 2 and --orders >= 1");

    const auto alpha =
        VOFunction::with_bounds(alpha_constant(c.alpha_min), c.alpha_min, c.alpha_max, c.horizon);
    const ESAParams params = select_parameters(c.eps, alpha, c.horizon, c.dt);
    const auto orders = detail::alpha_samples(c.alpha_min, c.alpha_max, c.orders);

    struct Row {
        double alpha, s, approx, rel;
    };
    std::vector<Row> rows;
    double worst = 0.0;
    const double log_lo = std::log(params.delta);
    for (double a : orders) {
        for (int i = 0; i < c.points; ++i) {
            const double s = i + 1 == c.points ? 1.0
                                               : std::exp(log_lo * (1.0 - static_cast<double>(i) /
                                                                              (c.points - 1)));
            const double approx = approx_kernel(params, a, s);
            const double rel = detail::relative_gap(approx, a, s);
            worst = std::max(worst, rel);
            rows.push_back({a, s, approx, rel});
        }
    }

    write_to(c.out, [&](std::ostream& os) {
        os << std::setprecision(17);
        if (c.format == "csv") {
            os << "alpha,s,approx,exact,rel_err\n";
            for (const auto& r : rows)
                os << r.alpha << ',' << r.s << ',' << r.approx << ',' << std::pow(r.s, -r.alpha)
                   << ',' << r.rel << '\n';
        } else {
            os << "| alpha | s | rel. error |\n|---|---|---|\n";
            for (const auto& r : rows)
                os << "| " << r.alpha << " | " << r.s << " | " << r.rel << " |\n";
        }
    });
    std::cerr << "kernel-check: N_eps=" << params.count() << " h=" << params.h << " range=("
              << params.n_lo << ", " << params.n_hi << "] rows=" << rows.size()
              << " max_rel_err=" << worst << " eps=" << c.eps << '\n';
    if (worst > c.eps) {
        std::cerr << "error: kernel bound violated: max relative error " << worst << " > " << c.eps
                  << '\n';
        return 1;
    }
    return 0;
}

struct StudyConfig {
    std::string problem = "example2";
    std::string alpha = "sin5";
    std::string n = "1000:4000";
    std::size_t m = 100;
    double horizon = 1.0;
    double x_right = 1.0;
    std::string eps = "dt2";
    std::string scheme = "both";
    std::string out;
    std::string format = "md";
    std::size_t repeats = 3;
    double tol = 0.15;
    std::optional<double> expect;
};

// Shared by derivative-bench (example1) and pde-bench.
int run_study(const StudyConfig& c, const ManufacturedProblem& problem) {
    require_format(c.format);
    const auto ns = parse_steps(c.n);
    const auto eps = parse_eps(c.eps);
    const auto schemes = parse_schemes(c.scheme);
    if (problem.kind == ProblemKind::Pde && c.m < 2) throw Invalid("--m must be at least 2");
    if (c.repeats < 1) throw Invalid("--repeats must be at least 1");

    std::vector<ScheduleEntry> schedule;
    for (std::size_t n : ns) {
        // fail fast: order bounds and kernel parameters before any solve
        const TimeGrid grid(problem.horizon, n);
        const auto order = problem.order_on(grid);
        if (eps) static_cast<void>(select_parameters(*eps, order, grid.horizon(), grid.dt()));
        schedule.push_back({n, c.m, eps});
    }

    StudyOptions options;
    options.timing_repeats = c.repeats;
    options.threads = threads_from_env();
    const auto table = refinement_study(problem, schemes, schedule, options);
    write_to(c.out, [&](std::ostream& os) {
        if (c.format == "csv") write_table_csv(os, table);
        else write_table_markdown(os, table);
    });

    int status = 0;
    for (const auto& r : table.rows) {
        if (!r.ok) {
            std::cerr << "error: " << r.scheme << " n=" << r.n << " failed: " << r.message << '\n';
            status = 1;
            continue;
        }
        if (!r.order) continue;
        const TimeGrid grid(problem.horizon, r.n);
        const double floor_order = 2.0 - problem.order_on(grid).alpha_max();
        const bool bad = c.expect ? std::abs(*r.order - *c.expect) > c.tol
                                  : *r.order < floor_order - c.tol;
        if (bad) {
            std::cerr << "error: " << r.scheme << " n=" << r.n << " order " << *r.order
                      << (c.expect ? " differs from expected " : " below 2 - alpha_max = ")
                      << (c.expect ? *c.expect : floor_order) << " by more than " << c.tol << '\n';
            status = 1;
        }
    }
    return status;
}

struct SolveConfig {
    std::string problem = "example2";
    std::string alpha = "sin5";
    std::size_t n = 1000;
    std::size_t m = 100;
    double horizon = 1.0;
    double x_right = 1.0;
    std::string eps = "dt2";
    std::string scheme = "fast";
    std::string out = "solution.csv";
    std::size_t snapshots = 0;
};

std::string with_suffix(const std::string& path, const std::string& tag) {
    const fs::path p(path);
    return (p.parent_path() / (p.stem().string() + "_" + tag + p.extension().string())).string();
}

int cmd_solve(const SolveConfig& c) {
    const auto problem = make_problem(c.problem, parse_alpha(c.alpha), c.horizon, c.x_right);
    const auto schemes = parse_schemes(c.scheme);
    const auto eps_opt = parse_eps(c.eps);
    if (c.n < 1) throw Invalid("--n must be at least 1");
    if (c.m < 2) throw Invalid("--m must be at least 2");
    if (c.out.empty()) throw Invalid("--out must name a file");

    const DiffusionProblem pde = problem.instantiate(c.n, c.m);
    const double eps = eps_opt.value_or(pde.time.dt() * pde.time.dt());
    const SolverOptions options{threads_from_env(), c.snapshots};

    std::vector<Solution> sols;
    for (Scheme s : schemes) {
        Solution sol = s == Scheme::L1 ? solve_l1(pde, options) : solve_fast_esa(pde, eps, options);
        const std::string path = schemes.size() > 1 ? with_suffix(c.out, sol.scheme) : c.out;
        write_to(path, [&](std::ostream& os) { write_solution_csv(os, sol, pde.space, pde.time); });
        const double err = max_error(sol, pde.space, problem.horizon, problem.exact);
        std::cout << std::setprecision(6) << "scheme=" << sol.scheme << " alpha=" << problem.alpha.name
                  << " n=" << c.n << " m=" << c.m;
        if (s == Scheme::Fast) std::cout << " eps=" << eps << " n_eps=" << sol.n_eps();
        std::cout << " err=" << err << " seconds=" << sol.seconds
                  << " aux_scalars=" << sol.aux_scalars << " out=" << path << '\n';
        sols.push_back(std::move(sol));
    }
    if (sols.size() == 2) {
        double diff = 0.0;
        for (std::size_t j = 0; j < sols[0].final_field.size(); ++j)
            diff = std::max(diff, std::abs(sols[0].final_field[j] - sols[1].final_field[j]));
        std::cout << "max_abs_diff=" << diff << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-order Caputo derivatives and time-fractional diffusion"};
    app.require_subcommand(1);

    KernelConfig kc;
    auto* kernel = app.add_subcommand("kernel-check", "Relative error of the exponential-sum kernel");
    kernel->add_option("--eps", kc.eps, "Kernel accuracy")->capture_default_str();
    kernel->add_option("--alpha-min", kc.alpha_min)->capture_default_str();
    kernel->add_option("--alpha-max", kc.alpha_max)->capture_default_str();
    kernel->add_option("--dt", kc.dt, "Time step; delta = dt/T")->capture_default_str();
    kernel->add_option("--T", kc.horizon, "Horizon")->capture_default_str();
    kernel->add_option("--points", kc.points, "Log-spaced s points in [delta, 1]")->capture_default_str();
    kernel->add_option("--orders", kc.orders, "Sampled orders")->capture_default_str();
    kernel->add_option("--out", kc.out, "Report file (stdout when empty)");
    kernel->add_option("--format", kc.format, "csv | md")->capture_default_str();

    StudyConfig dc;
    dc.n = "10000:40000";
    auto* deriv = app.add_subcommand("derivative-bench", "Refinement study of the scalar problem with exact solution t^2");
    StudyConfig pc;
    auto* pdeb = app.add_subcommand("pde-bench", "Refinement study of a diffusion problem");
    for (auto [cmd, cfg] : {std::pair{deriv, &dc}, std::pair{pdeb, &pc}}) {
        cmd->add_option("--alpha", cfg->alpha, "sin5 | linear | custom:linear:a,b | custom:sin:a,b,c")
            ->capture_default_str();
        cmd->add_option("--n", cfg->n, "Steps: N or first:last doubling chain")->capture_default_str();
        cmd->add_option("--T", cfg->horizon)->capture_default_str();
        cmd->add_option("--eps", cfg->eps, "dt2 or a value")->capture_default_str();
        cmd->add_option("--scheme", cfg->scheme, "l1 | fast | both")->capture_default_str();
        cmd->add_option("--out", cfg->out, "Table file (stdout when empty)");
        cmd->add_option("--format", cfg->format, "csv | md")->capture_default_str();
        cmd->add_option("--repeats", cfg->repeats, "Timed runs per row (median)")->capture_default_str();
        cmd->add_option("--tol", cfg->tol, "Order tolerance")->capture_default_str();
        cmd->add_option("--expect-order", cfg->expect, "Expected order (default: at least 2 - alpha_max)");
    }
    pdeb->add_option("--problem", pc.problem, "example2 | sine | zero")->capture_default_str();
    pdeb->add_option("--m", pc.m, "Spatial cells")->capture_default_str();
    pdeb->add_option("--xr", pc.x_right)->capture_default_str();

    SolveConfig sc;
    auto* solve = app.add_subcommand("solve", "Solve a diffusion problem and write the x,t,u field");
    solve->add_option("--problem", sc.problem, "example2 | sine | zero")->capture_default_str();
    solve->add_option("--alpha", sc.alpha, "sin5 | linear | custom:linear:a,b | custom:sin:a,b,c")
        ->capture_default_str();
    solve->add_option("--n", sc.n, "Time steps")->capture_default_str();
    solve->add_option("--m", sc.m, "Spatial cells")->capture_default_str();
    solve->add_option("--T", sc.horizon)->capture_default_str();
    solve->add_option("--xr", sc.x_right)->capture_default_str();
    solve->add_option("--eps", sc.eps, "dt2 or a value")->capture_default_str();
    solve->add_option("--scheme", sc.scheme, "l1 | fast | both")->capture_default_str();
    solve->add_option("--out", sc.out, "CSV path; with both schemes _l1/_fast are appended")
        ->capture_default_str();
    solve->add_option("--snapshots", sc.snapshots, "Store every k-th level (0: final only)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return 2;
    }

    try {
        if (*kernel) return cmd_kernel_check(kc);
        if (*deriv) {
            const auto alpha = parse_alpha(dc.alpha);
            if (!(dc.horizon > 0.0)) throw Invalid("--T must be positive");
            auto problem = example1(alpha);
            problem.horizon = dc.horizon;
            return run_study(dc, problem);
        }
        if (*pdeb) return run_study(pc, make_problem(pc.problem, parse_alpha(pc.alpha), pc.horizon,
                                                     pc.x_right));
        if (*solve) return cmd_solve(sc);
    } catch (const Invalid& e) {
        std::cerr << "error: " << e.what() << '\n' << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
