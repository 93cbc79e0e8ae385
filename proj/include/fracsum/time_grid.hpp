#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fracsum {

/// Uniform time grid t_k = k*dt, k = 0..n, with n*dt = T.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
        if (!(horizon > 0.0) || !std::isfinite(horizon))
            throw std::invalid_argument("TimeGrid: horizon must be positive and finite");
        if (steps < 1) throw std::invalid_argument("TimeGrid: need at least one step");
        dt_ = horizon / static_cast<double>(steps);
    }

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    /// Node k; t(n) is exactly T.
    [[nodiscard]] double t(std::size_t k) const noexcept {
        return k == steps_ ? horizon_ : static_cast<double>(k) * dt_;
    }

private:
    double horizon_;
    std::size_t steps_;
    double dt_;
};

}  // namespace fracsum
