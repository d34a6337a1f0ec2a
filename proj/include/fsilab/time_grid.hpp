#pragma once

#include <stdexcept>

namespace fsilab {

// Uniform time grid on [0, T] with n_steps intervals and n_steps+1 nodes.
struct TimeGrid {
    double T = 1.0;
    int n_steps = 1;

    TimeGrid() = default;
    TimeGrid(double final_time, int steps) : T(final_time), n_steps(steps) {
        if (!(T > 0.0)) { throw std::invalid_argument("TimeGrid: T must be positive"); }
        if (n_steps < 1) { throw std::invalid_argument("TimeGrid: n_steps must be >= 1"); }
    }

    double dt() const { return T / n_steps; }
    int n_nodes() const { return n_steps + 1; }
    // t(0) == 0 and t(n_steps) == T exactly.
    double t(int j) const { return (T * j) / n_steps; }
};

}  // namespace fsilab
