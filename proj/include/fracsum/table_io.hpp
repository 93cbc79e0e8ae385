#pragma once

// Text output: solution fields as `x,t,u` CSV and convergence tables as CSV
// or as a Markdown table with the two schemes side by side.

#include <cstddef>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "fracsum/diffusion_solver.hpp"
#include "fracsum/verification.hpp"

namespace fracsum {

/// One row per node per stored level; the final level only when the
/// solution holds no snapshots. 17 significant digits round-trip doubles.
inline void write_solution_csv(std::ostream& os, const Solution& solution,
                               const SpatialGrid& space, const TimeGrid& time) {
    os << "x,t,u\n";
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << std::setprecision(17);
    auto emit = [&](double t, const std::vector<double>& u) {
        for (std::size_t j = 0; j < u.size(); ++j) os << space.x(j) << ',' << t << ',' << u[j] << '\n';
    };
    if (solution.snapshots.empty()) {
        emit(time.horizon(), solution.final_field);
    } else {
        for (const auto& s : solution.snapshots) emit(s.t, s.u);
    }
    os.flags(flags);
    os.precision(prec);
}

inline constexpr const char* kTableCsvHeader =
    "scheme,alpha,n,m,epsilon,err,order,seconds,aux_scalars,n_eps";

namespace detail {

inline std::string sci(double v, int digits) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(digits) << v;
    return s.str();
}

inline std::string fixed(double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

}  // namespace detail

/// CSV with header kTableCsvHeader. Empty fields: order of a first row, n_eps
/// and epsilon of the L1 scheme, err of a failed row.
inline void write_table_csv(std::ostream& os, const ConvergenceTable& table) {
    os << kTableCsvHeader << '\n';
    for (const auto& r : table.rows) {
        const bool fast = r.scheme == "fast";
        os << r.scheme << ',' << r.alpha << ',' << r.n << ',' << r.m << ','
           << (fast ? detail::sci(r.epsilon, 6) : "") << ','
           << (r.ok ? detail::sci(r.err, 8) : "") << ','
           << (r.order ? detail::fixed(*r.order, 4) : "") << ',' << detail::fixed(r.seconds, 4)
           << ',' << r.aux_scalars << ',' << (fast ? std::to_string(r.n_eps) : "") << '\n';
    }
}

/// Markdown table: one line per (order function, n, m) with the L1 and the
/// fast scheme in adjacent column groups.
inline void write_table_markdown(std::ostream& os, const ConvergenceTable& table) {
    using Key = std::tuple<std::string, std::size_t, std::size_t>;
    std::vector<Key> order;
    std::map<Key, const ConvergenceRow*> l1, fast;
    for (const auto& r : table.rows) {
        const Key key{r.alpha, r.n, r.m};
        if (!l1.count(key) && !fast.count(key)) order.push_back(key);
        (r.scheme == "fast" ? fast : l1)[key] = &r;
    }
    auto cells = [](const ConvergenceRow* r) {
        if (r == nullptr) return std::string(" - | - | - | - |");
        if (!r->ok) return std::string(" failed | - | - | - |");
        return " " + detail::sci(r->err, 4) + " | " +
               (r->order ? detail::fixed(*r->order, 2) : std::string("-")) + " | " +
               detail::fixed(r->seconds, 2) + " | " + detail::sci(static_cast<double>(r->aux_scalars), 2) +
               " |";
    };
    os << "| alpha(t) | n | m | L1 Err | Order_t | CPU(s) | Memory | Fast Err | Order_t | CPU(s) | "
          "Memory | N_eps |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    std::string last_alpha;
    for (const auto& key : order) {
        const auto& [alpha, n, m] = key;
        const auto* a = l1.count(key) ? l1.at(key) : nullptr;
        const auto* b = fast.count(key) ? fast.at(key) : nullptr;
        os << "| " << (alpha == last_alpha ? "" : alpha) << " | " << n << " | " << m << " |"
           << cells(a) << cells(b) << ' ' << (b && b->ok ? std::to_string(b->n_eps) : "-") << " |\n";
        last_alpha = alpha;
    }
}

}  // namespace fracsum
