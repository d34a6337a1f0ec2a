#include "fsilab/fsi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fsilab {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "ok";
        case SolveStatus::margin_violation: return "margin_violation";
        case SolveStatus::coupling_divergence: return "coupling_divergence";
        case SolveStatus::step_failure: return "step_failure";
        case SolveStatus::singular_system: return "singular_system";
        case SolveStatus::cfl_violation: return "cfl_violation";
    }
    return "unknown";
}

int FsiSolution::levels_complete() const {
    if (status == SolveStatus::ok) { return traj.grid.n_nodes(); }
    return std::max(fail_index, 0);
}

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) { m = std::max(m, std::abs(x)); }
    return m;
}

// Samples w0 through the t=0 maps onto both reference grids. The interface
// nodes take the kinematic value and the outer nodes the boundary signals.
void sample_initial_fields(SideField& left, SideField& right,
                           const std::function<double(double)>& w0, double q0,
                           double interface_value, double alpha0, double eta0) {
    const int nl = left.n_cells;
    for (int j = 0; j <= nl; ++j) {
        left.at(0, j) = w0(map_left_from_reference(left.y(j), q0));
    }
    left.at(0, 0) = alpha0;
    left.at(0, nl) = interface_value;

    const int nr = right.n_cells;
    for (int j = 0; j <= nr; ++j) {
        right.at(0, j) = w0(map_right_from_reference(right.y(j), q0));
    }
    right.at(0, 0) = interface_value;
    right.at(0, nr) = eta0;
}

double flux_jump(const SideField& left, const SideField& right, int level, double p) {
    return boundary_flux(right, FieldEnd::lower, level) / (1.0 - p) -
           boundary_flux(left, FieldEnd::upper, level) / (1.0 + p);
}

void record_traces(FsiSolution& sol, int level, double alpha_v, double eta_v) {
    const double p = sol.traj.p[level];
    sol.traces.alpha[level] = alpha_v;
    sol.traces.eta[level] = eta_v;
    sol.traces.beta[level] = boundary_flux(sol.left, FieldEnd::lower, level) / (1.0 + p);
    sol.traces.eta_flux[level] = boundary_flux(sol.right, FieldEnd::upper, level) / (1.0 - p);
    sol.traces.jump[level] = flux_jump(sol.left, sol.right, level, p);
}

FsiSolution make_empty_solution(const TimeGrid& grid, int n_left, int n_right, double delta,
                                double bound_m) {
    FsiSolution sol;
    sol.left = SideField(Side::left, n_left, grid);
    sol.right = SideField(Side::right, n_right, grid);
    sol.traj.grid = grid;
    sol.traj.delta = delta;
    sol.traj.bound_m = bound_m;
    const int n = grid.n_nodes();
    sol.traj.p.assign(n, 0.0);
    sol.traj.p_dot.assign(n, 0.0);
    sol.traj.p_ddot.assign(n, 0.0);
    sol.traces.grid = grid;
    sol.traces.alpha.assign(n, 0.0);
    sol.traces.beta.assign(n, 0.0);
    sol.traces.eta.assign(n, 0.0);
    sol.traces.eta_flux.assign(n, 0.0);
    sol.traces.jump.assign(n, 0.0);
    return sol;
}

StepInputs make_inputs(Side side, double p_old, double v_old, double p_new, double v_new,
                       double delta, double bc_outer, double bc_interface) {
    StepInputs in;
    in.coef_old = side_coefficients(side, p_old, v_old, delta);
    in.coef_new = side_coefficients(side, p_new, v_new, delta);
    if (side == Side::left) {
        in.bc_lower = bc_outer;
        in.bc_upper = bc_interface;
    } else {
        in.bc_lower = bc_interface;
        in.bc_upper = bc_outer;
    }
    return in;
}

SolveStatus status_from(const StepOutcome& o) {
    return o.status == StepStatus::singular ? SolveStatus::singular_system
                                            : SolveStatus::step_failure;
}

}  // namespace

void validate_problem(const FsiProblem& pb) {
    std::ostringstream msg;
    if (pb.grid.n_steps < 1) { throw std::invalid_argument("FsiProblem: empty time grid"); }
    if (pb.n_cells_left < 4 || pb.n_cells_right < 4) {
        throw std::invalid_argument("FsiProblem: need at least 4 cells per side");
    }
    if (!(pb.delta > 0.0 && pb.delta < 1.0)) {
        throw std::invalid_argument("FsiProblem: delta must lie in (0,1)");
    }
    if (std::abs(pb.q0) > 1.0 - pb.delta) {
        msg << "FsiProblem: |q0| = " << std::abs(pb.q0) << " exceeds 1 - delta = "
            << 1.0 - pb.delta;
        throw std::invalid_argument(msg.str());
    }
    const std::size_t n = static_cast<std::size_t>(pb.grid.n_nodes());
    if (pb.alpha.size() != n || pb.eta.size() != n) {
        throw std::invalid_argument("FsiProblem: alpha/eta must be sampled on the time grid");
    }
    if (!pb.w0) { throw std::invalid_argument("FsiProblem: missing initial profile w0"); }

    const double c0 = std::abs(pb.w0(-1.0) - pb.alpha[0]);
    const double c1 = std::abs(pb.w0(1.0) - pb.eta[0]);
    const double c2 = std::abs(pb.w0(pb.q0) - pb.q1);
    if (c0 > pb.compat_tol || c1 > pb.compat_tol || c2 > pb.compat_tol) {
        msg << "FsiProblem: incompatible data (|w0(-1)-alpha(0)| = " << c0
            << ", |w0(1)-eta(0)| = " << c1 << ", |w0(q0)-q1| = " << c2
            << ", tolerance = " << pb.compat_tol << ")";
        throw std::invalid_argument(msg.str());
    }

    // Advective CFL estimate from data magnitudes: transformed transport speed
    // is bounded by (|p'| + |z|)/min(1 +- p) <= 2 * data_max / delta.
    double data_max = std::max(std::abs(pb.q1), std::max(max_abs(pb.alpha), max_abs(pb.eta)));
    const int probe = 256;
    for (int i = 0; i <= probe; ++i) {
        const double x = -1.0 + 2.0 * i / probe;
        data_max = std::max(data_max, std::abs(pb.w0(x)));
    }
    const double h_min = std::min(1.0 / pb.n_cells_left, 1.0 / pb.n_cells_right);
    const double vel_est = 2.0 * data_max / pb.delta;
    if (pb.grid.dt() * vel_est > h_min * (1.0 + 1e-12)) {
        msg << "FsiProblem: advective CFL estimate fails (dt = " << pb.grid.dt()
            << ", estimated speed = " << vel_est << ", h = " << h_min
            << "); increase n_steps to at least "
            << static_cast<int>(std::ceil(pb.grid.T * vel_est / h_min));
        throw std::invalid_argument(msg.str());
    }

    // Picard contraction estimate for the interface coupling near p ~ q0.
    const double kappa = 1.5 * pb.grid.dt() / (h_min * (1.0 - pb.q0 * pb.q0));
    if (kappa >= 1.0) {
        msg << "FsiProblem: coupling iteration would not contract (estimate " << kappa
            << " >= 1); increase n_steps relative to n_cells";
        throw std::invalid_argument(msg.str());
    }
}

FsiSolution solve_forward(const FsiProblem& pb) {
    validate_problem(pb);
    const TimeGrid& grid = pb.grid;
    const double dt = grid.dt();
    const double bound = 1.0 - pb.delta;

    FsiSolution sol = make_empty_solution(grid, pb.n_cells_left, pb.n_cells_right, pb.delta,
                                          pb.bound_m);
    sol.traj.p[0] = pb.q0;
    sol.traj.p_dot[0] = pb.q1;
    sample_initial_fields(sol.left, sol.right, pb.w0, pb.q0, pb.q1, pb.alpha[0], pb.eta[0]);
    sol.traj.p_ddot[0] = flux_jump(sol.left, sol.right, 0, pb.q0);
    record_traces(sol, 0, pb.alpha[0], pb.eta[0]);

    const int max_picard = std::max(1, pb.coupling_iterations);
    for (int n = 0; n < grid.n_steps; ++n) {
        const double p_n = sol.traj.p[n];
        const double v_n = sol.traj.p_dot[n];
        const double a_n = sol.traj.p_ddot[n];

        // Taylor predictor for position and velocity.
        double p_hat = p_n + dt * v_n + 0.5 * dt * dt * a_n;
        double v_hat = v_n + dt * a_n;
        double g_last = a_n;
        double prev_update = -1.0;

        bool aborted = false;
        for (int it = 0; it < max_picard && !aborted; ++it) {
            if (!std::isfinite(p_hat) || !std::isfinite(v_hat)) {
                sol.status = SolveStatus::coupling_divergence;
                aborted = true;
                break;
            }
            if (std::abs(p_hat) > bound) {
                sol.status = SolveStatus::margin_violation;
                aborted = true;
                break;
            }
            const StepInputs in_l = make_inputs(Side::left, p_n, v_n, p_hat, v_hat, pb.delta,
                                                pb.alpha[n + 1], v_hat);
            const StepInputs in_r = make_inputs(Side::right, p_n, v_n, p_hat, v_hat, pb.delta,
                                                pb.eta[n + 1], v_hat);
            const StepOutcome ol = advance_step(sol.left, n, in_l);
            const StepOutcome orr = advance_step(sol.right, n, in_r);
            if (!ol.ok() || !orr.ok()) {
                sol.status = status_from(ol.ok() ? orr : ol);
                aborted = true;
                break;
            }
            const double g = flux_jump(sol.left, sol.right, n + 1, p_hat);
            const double v_new = v_n + 0.5 * dt * (a_n + g);
            const double p_new = p_n + 0.5 * dt * (v_n + v_new);
            const double update = std::abs(p_new - p_hat);
            p_hat = p_new;
            v_hat = v_new;
            g_last = g;
            if (update < pb.coupling_tol) { break; }
            if (prev_update >= 0.0 && update > prev_update && update > 1e-6) {
                sol.status = SolveStatus::coupling_divergence;
                aborted = true;
                break;
            }
            prev_update = update;
        }
        if (!aborted && std::abs(p_hat) > bound) {
            sol.status = SolveStatus::margin_violation;
            aborted = true;
        }
        if (!aborted) {
            // Synchronization pass: the stored fields correspond to the
            // accepted (p, p') so trace extraction is definitionally
            // consistent with a prescribed re-solve of the same trajectory.
            const StepInputs in_l = make_inputs(Side::left, p_n, v_n, p_hat, v_hat, pb.delta,
                                                pb.alpha[n + 1], v_hat);
            const StepInputs in_r = make_inputs(Side::right, p_n, v_n, p_hat, v_hat, pb.delta,
                                                pb.eta[n + 1], v_hat);
            const StepOutcome ol = advance_step(sol.left, n, in_l);
            const StepOutcome orr = advance_step(sol.right, n, in_r);
            if (!ol.ok() || !orr.ok()) {
                sol.status = status_from(ol.ok() ? orr : ol);
                aborted = true;
            }
        }
        if (aborted) {
            sol.fail_index = n + 1;
            return sol;
        }
        sol.traj.p[n + 1] = p_hat;
        sol.traj.p_dot[n + 1] = v_hat;
        sol.traj.p_ddot[n + 1] = g_last;
        record_traces(sol, n + 1, pb.alpha[n + 1], pb.eta[n + 1]);
    }
    return sol;
}

FsiSolution solve_prescribed(const PrescribedProblem& pb) {
    const TimeGrid& grid = pb.grid;
    const int n_nodes = grid.n_nodes();
    if (static_cast<int>(pb.traj.p.size()) != n_nodes ||
        static_cast<int>(pb.traj.p_dot.size()) != n_nodes ||
        static_cast<int>(pb.traj.p_ddot.size()) != n_nodes) {
        throw std::invalid_argument("solve_prescribed: trajectory not sampled on the grid");
    }
    if (static_cast<int>(pb.alpha.size()) != n_nodes ||
        static_cast<int>(pb.eta.size()) != n_nodes) {
        throw std::invalid_argument("solve_prescribed: alpha/eta not sampled on the grid");
    }
    if (!pb.w0) { throw std::invalid_argument("solve_prescribed: missing w0"); }
    if (!pb.interface_value.empty() &&
        static_cast<int>(pb.interface_value.size()) != n_nodes) {
        throw std::invalid_argument("solve_prescribed: interface_value size mismatch");
    }
    const std::vector<double>& iface =
        pb.interface_value.empty() ? pb.traj.p_dot : pb.interface_value;

    FsiSolution sol = make_empty_solution(grid, pb.n_cells_left, pb.n_cells_right,
                                          pb.traj.delta, pb.traj.bound_m);
    sol.traj = pb.traj;

    const double bound = 1.0 - pb.traj.delta;
    for (int j = 0; j < n_nodes; ++j) {
        if (!(std::abs(pb.traj.p[j]) <= bound) || !std::isfinite(pb.traj.p_dot[j])) {
            sol.status = SolveStatus::margin_violation;
            sol.fail_index = 0;
            return sol;
        }
    }

    // CFL estimate including the prescribed interface velocity.
    double data_max = std::max(max_abs(pb.alpha), max_abs(pb.eta));
    const int probe = 256;
    for (int i = 0; i <= probe; ++i) {
        data_max = std::max(data_max, std::abs(pb.w0(-1.0 + 2.0 * i / probe)));
    }
    const double vmax_traj = std::max(max_abs(pb.traj.p_dot), max_abs(iface));
    const double h_min = std::min(1.0 / pb.n_cells_left, 1.0 / pb.n_cells_right);
    const double vel_est = (2.0 * data_max + vmax_traj) / pb.traj.delta;
    if (grid.dt() * vel_est > h_min * (1.0 + 1e-12)) {
        sol.status = SolveStatus::cfl_violation;
        sol.fail_index = 0;
        return sol;
    }

    sample_initial_fields(sol.left, sol.right, pb.w0, pb.traj.p[0], iface[0], pb.alpha[0],
                          pb.eta[0]);
    record_traces(sol, 0, pb.alpha[0], pb.eta[0]);

    for (int n = 0; n < grid.n_steps; ++n) {
        const StepInputs in_l =
            make_inputs(Side::left, pb.traj.p[n], pb.traj.p_dot[n], pb.traj.p[n + 1],
                        pb.traj.p_dot[n + 1], pb.traj.delta, pb.alpha[n + 1], iface[n + 1]);
        const StepInputs in_r =
            make_inputs(Side::right, pb.traj.p[n], pb.traj.p_dot[n], pb.traj.p[n + 1],
                        pb.traj.p_dot[n + 1], pb.traj.delta, pb.eta[n + 1], iface[n + 1]);
        const StepOutcome ol = advance_step(sol.left, n, in_l);
        const StepOutcome orr = advance_step(sol.right, n, in_r);
        if (!ol.ok() || !orr.ok()) {
            sol.status = status_from(ol.ok() ? orr : ol);
            sol.fail_index = n + 1;
            return sol;
        }
        record_traces(sol, n + 1, pb.alpha[n + 1], pb.eta[n + 1]);
    }
    return sol;
}

std::pair<std::vector<double>, std::vector<double>> extract_observation(const FsiSolution& sol) {
    return {sol.traces.alpha, sol.traces.beta};
}

std::vector<double> jump_defect(const FsiSolution& sol) {
    const int n = sol.levels_complete();
    std::vector<double> d(n, 0.0);
    for (int j = 0; j < n; ++j) { d[j] = sol.traces.jump[j] - sol.traj.p_ddot[j]; }
    return d;
}

double check_jump_consistency(const FsiSolution& sol) {
    const int n = sol.levels_complete();
    double m = 0.0;
    for (int j = 1; j < n; ++j) {
        m = std::max(m, std::abs(sol.traces.jump[j] - sol.traj.p_ddot[j]));
    }
    return m;
}

}  // namespace fsilab
