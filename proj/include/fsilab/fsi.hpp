#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "fsilab/burgers.hpp"
#include "fsilab/geometry.hpp"
#include "fsilab/time_grid.hpp"
#include "fsilab/trajectory.hpp"

namespace fsilab {

// Data of the coupled system: fluid on (-1,1) minus the particle path, Dirichlet
// signals at both outer ends, particle initial position and velocity.
struct FsiProblem {
    TimeGrid grid;
    int n_cells_left = 128;
    int n_cells_right = 128;
    std::function<double(double)> w0;  // initial velocity on [-1, 1]
    std::vector<double> alpha;         // w(-1, t_j)
    std::vector<double> eta;           // w(+1, t_j)
    double q0 = 0.0;
    double q1 = 0.0;
    double delta = 0.1;
    double bound_m = 10.0;
    double compat_tol = 1e-8;   // tolerance of the data-compatibility check
    int coupling_iterations = 2;
    double coupling_tol = 1e-10;
};

struct CauchyTraces {
    TimeGrid grid;
    std::vector<double> alpha;     // w(-1, .)
    std::vector<double> beta;      // w_x(-1, .)
    std::vector<double> eta;       // w(1, .)
    std::vector<double> eta_flux;  // w_x(1, .)
    std::vector<double> jump;      // [w_x](p(.), .) measured from the fields
};

enum class SolveStatus {
    ok,
    margin_violation,     // interface left |p| <= 1 - delta
    coupling_divergence,  // Picard update grew
    step_failure,         // non-finite field values
    singular_system,      // tridiagonal pivot breakdown
    cfl_violation         // prescribed trajectory too fast for the resolution
};

const char* to_string(SolveStatus s);

struct FsiSolution {
    SideField left;
    SideField right;
    InterfaceTrajectory traj;
    CauchyTraces traces;
    SolveStatus status = SolveStatus::ok;
    int fail_index = -1;  // first incomplete time level when status != ok

    bool partial() const { return status != SolveStatus::ok; }
    // Number of complete time levels (rows safe to read).
    int levels_complete() const;
};

// Throws std::invalid_argument with a diagnostic on incompatible data,
// inadmissible q0 or a resolution that fails the advective CFL estimate.
void validate_problem(const FsiProblem& problem);

// Advances both mapped sides together with the particle law
// p'' = [w_x](p(t),t), kinematic value w(p(t),t) = p'(t) imposed at the
// interface nodes. Per step: Taylor predictor for (p, p'), a fixed number of
// Picard passes re-advancing the fields and correcting (p', p) by the
// trapezoidal rule, then one synchronization advance with the accepted values
// so the stored fields correspond exactly to the stored trajectory.
// Runtime failures are reported through the status field, not exceptions.
FsiSolution solve_forward(const FsiProblem& problem);

// Lateral variant: the trajectory is imposed kinematically (no particle ODE);
// both sides are advanced with the candidate's own p' as interface data. The
// measured jump minus the candidate's p'' is the Newton-law defect used by the
// inverse machinery.
struct PrescribedProblem {
    TimeGrid grid;
    int n_cells_left = 128;
    int n_cells_right = 128;
    std::function<double(double)> w0;
    std::vector<double> alpha;
    std::vector<double> eta;
    InterfaceTrajectory traj;
    // Dirichlet data imposed at the interface nodes; empty means the kinematic
    // value traj.p_dot. A non-kinematic series keeps the domain (and mesh
    // motion) fixed while the interface data varies, which is what the lateral
    // trace experiments need.
    std::vector<double> interface_value;
};

FsiSolution solve_prescribed(const PrescribedProblem& problem);

// The x = -1 Cauchy pair used as inverse-problem data.
std::pair<std::vector<double>, std::vector<double>> extract_observation(const FsiSolution& sol);

// jump(t_j) - p''(t_j) per node.
std::vector<double> jump_defect(const FsiSolution& sol);

// max_{j >= 1} |jump(t_j) - p''(t_j)|.
double check_jump_consistency(const FsiSolution& sol);

}  // namespace fsilab
