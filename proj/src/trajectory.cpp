#include "fsilab/trajectory.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace fsilab {

namespace {

// Trapezoidal quadrature of a sampled series squared.
double trapezoid_sq(const std::vector<double>& v, double dt) {
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double w = (j == 0 || j + 1 == v.size()) ? 0.5 : 1.0;
        acc += w * v[j] * v[j];
    }
    return acc * dt;
}

}  // namespace

TrajectoryValidation validate_trajectory(const InterfaceTrajectory& traj) {
    TrajectoryValidation r;
    const std::size_t n = traj.p.size();
    if (n != static_cast<std::size_t>(traj.n_nodes()) || traj.p_dot.size() != n ||
        traj.p_ddot.size() != n) {
        r.bound_ok = false;
        r.h2_ok = false;
        return r;
    }
    const double dt = traj.grid.dt();
    for (double v : traj.p) { r.max_abs_p = std::max(r.max_abs_p, std::abs(v)); }
    r.margin = (1.0 - traj.delta) - r.max_abs_p;
    r.bound_ok = r.margin >= -1e-12;

    r.h2_norm = std::sqrt(trapezoid_sq(traj.p, dt) + trapezoid_sq(traj.p_dot, dt) +
                          trapezoid_sq(traj.p_ddot, dt));
    r.h2_ok = r.h2_norm <= traj.bound_m + 1e-12;

    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double dp = (traj.p[j + 1] - traj.p[j - 1]) / (2.0 * dt);
        const double dv = (traj.p_dot[j + 1] - traj.p_dot[j - 1]) / (2.0 * dt);
        r.max_pdot_defect = std::max(r.max_pdot_defect, std::abs(dp - traj.p_dot[j]));
        r.max_pddot_defect = std::max(r.max_pddot_defect, std::abs(dv - traj.p_ddot[j]));
    }
    return r;
}

InterfaceTrajectory sample_trajectory(const TimeGrid& grid,
                                      const std::function<double(double)>& p,
                                      const std::function<double(double)>& p_dot,
                                      const std::function<double(double)>& p_ddot,
                                      double delta, double bound_m) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("sample_trajectory: delta must lie in (0,1)");
    }
    InterfaceTrajectory traj;
    traj.grid = grid;
    traj.delta = delta;
    traj.bound_m = bound_m;
    const int n = grid.n_nodes();
    traj.p.resize(n);
    traj.p_dot.resize(n);
    traj.p_ddot.resize(n);
    for (int j = 0; j < n; ++j) {
        const double t = grid.t(j);
        traj.p[j] = p(t);
        traj.p_dot[j] = p_dot(t);
        traj.p_ddot[j] = p_ddot(t);
    }
    return traj;
}

InterfaceTrajectory constant_trajectory(const TimeGrid& grid, double q0, double delta,
                                        double bound_m) {
    return sample_trajectory(
        grid, [q0](double) { return q0; }, [](double) { return 0.0; },
        [](double) { return 0.0; }, delta, bound_m);
}

}  // namespace fsilab
