#pragma once

#include <functional>
#include <vector>

#include "fsilab/time_grid.hpp"

namespace fsilab {

// Interface trajectory sampled on a uniform time grid. Position, velocity and
// acceleration are carried explicitly; analytic trajectories are sampled with
// exact derivatives and solver-produced ones store what the particle
// integrator computed, so nothing is re-differenced downstream.
struct InterfaceTrajectory {
    TimeGrid grid;
    std::vector<double> p;       // position, one value per grid node
    std::vector<double> p_dot;   // velocity
    std::vector<double> p_ddot;  // acceleration
    double delta = 0.1;          // admissibility margin, |p| <= 1 - delta
    double bound_m = 10.0;       // H^2(0,T) bound used by validation

    int n_nodes() const { return grid.n_nodes(); }
};

struct TrajectoryValidation {
    double max_abs_p = 0.0;
    double h2_norm = 0.0;
    double margin = 0.0;  // (1 - delta) - max|p|; negative when the bound fails
    // Centered finite-difference consistency defects, measured on interior nodes.
    double max_pdot_defect = 0.0;
    double max_pddot_defect = 0.0;
    bool bound_ok = false;
    bool h2_ok = false;

    bool pass() const { return bound_ok && h2_ok; }
};

// Reports max|p|, the discrete H^2(0,T) norm (trapezoidal quadrature of
// p^2 + p'^2 + p''^2) and the margin to 1 - delta. Never throws; failures are
// carried in the report flags.
TrajectoryValidation validate_trajectory(const InterfaceTrajectory& traj);

// Samples an analytic trajectory with exact derivatives.
InterfaceTrajectory sample_trajectory(const TimeGrid& grid,
                                      const std::function<double(double)>& p,
                                      const std::function<double(double)>& p_dot,
                                      const std::function<double(double)>& p_ddot,
                                      double delta, double bound_m);

// Stationary particle at q0.
InterfaceTrajectory constant_trajectory(const TimeGrid& grid, double q0, double delta,
                                        double bound_m);

}  // namespace fsilab
