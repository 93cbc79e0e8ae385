#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracsum {

/// Solves the tridiagonal system
///   sub[j] x[j-1] + diag[j] x[j] + sup[j] x[j+1] = rhs[j],  j = 0..N-1
/// by forward elimination and back substitution (sub[0] and sup[N-1] are
/// ignored). The matrix must be strictly diagonally dominant by rows.
inline std::vector<double> tridiagonal_solve(std::span<const double> sub,
                                             std::span<const double> diag,
                                             std::span<const double> sup,
                                             std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (sub.size() != n || sup.size() != n || rhs.size() != n)
        throw std::invalid_argument("tridiagonal_solve: length mismatch");
    if (n == 0) return {};
    for (std::size_t j = 0; j < n; ++j) {
        const double off = (j > 0 ? std::abs(sub[j]) : 0.0) + (j + 1 < n ? std::abs(sup[j]) : 0.0);
        if (!(std::abs(diag[j]) > off))
            throw std::domain_error("tridiagonal_solve: matrix is not strictly diagonally dominant");
    }

    std::vector<double> c(n), x(n);
    c[0] = n > 1 ? sup[0] / diag[0] : 0.0;
    x[0] = rhs[0] / diag[0];
    for (std::size_t j = 1; j < n; ++j) {
        const double denom = diag[j] - sub[j] * c[j - 1];
        c[j] = j + 1 < n ? sup[j] / denom : 0.0;
        x[j] = (rhs[j] - sub[j] * x[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= c[j] * x[j + 1];
    return x;
}

/// In-place solve of -x[j-1] + d x[j] - x[j+1] = b[j] with d > 2 (the
/// per-step system of the diffusion schemes). `scratch` must have b.size()
/// entries.
inline void solve_laplacian_shifted(double d, std::span<double> b, std::span<double> scratch) {
    const std::size_t n = b.size();
    if (scratch.size() < n) throw std::invalid_argument("solve_laplacian_shifted: scratch too small");
    if (!(d > 2.0)) throw std::domain_error("solve_laplacian_shifted: diagonal must exceed 2");
    if (n == 0) return;
    double denom = d;
    scratch[0] = -1.0 / denom;
    b[0] /= denom;
    for (std::size_t j = 1; j < n; ++j) {
        denom = d + scratch[j - 1];
        scratch[j] = -1.0 / denom;
        b[j] = (b[j] + b[j - 1]) / denom;
    }
    for (std::size_t j = n - 1; j-- > 0;) b[j] -= scratch[j] * b[j + 1];
}

}  // namespace fracsum
