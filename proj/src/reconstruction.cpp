#include "fsilab/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fsilab {

UnknownSelector unknowns_from_string(const std::string& s) {
    if (s == "p_only") { return UnknownSelector::p_only; }
    if (s == "eta_only") { return UnknownSelector::eta_only; }
    if (s == "p_and_eta") { return UnknownSelector::p_and_eta; }
    throw std::invalid_argument("unknown unknowns selector: " + s);
}

const char* to_string(UnknownSelector u) {
    switch (u) {
        case UnknownSelector::p_only: return "p_only";
        case UnknownSelector::eta_only: return "eta_only";
        case UnknownSelector::p_and_eta: return "p_and_eta";
    }
    return "unknown";
}

ObservationEngine::ObservationEngine(const ReconstructionProblem& pb)
    : pb_(pb),
      p_spline_(pb.grid.T, std::max(4, pb.p_basis)),
      eta_spline_(pb.grid.T, std::max(4, pb.eta_basis)) {
    const int n_nodes = pb.grid.n_nodes();
    if (static_cast<int>(pb.alpha.size()) != n_nodes ||
        static_cast<int>(pb.beta_obs.size()) != n_nodes) {
        throw std::invalid_argument("ReconstructionProblem: alpha/beta_obs size mismatch");
    }
    if (!pb.w0) { throw std::invalid_argument("ReconstructionProblem: missing w0"); }
    if (pb.lambda_p < 0.0 || pb.lambda_eta < 0.0 || pb.mu_jump < 0.0) {
        throw std::invalid_argument("ReconstructionProblem: weights must be >= 0");
    }

    p_active_ = pb.unknowns != UnknownSelector::eta_only;
    eta_active_ = pb.unknowns != UnknownSelector::p_only;
    if (!p_active_ && static_cast<int>(pb.known_p.p.size()) != n_nodes) {
        throw std::invalid_argument(
            "ReconstructionProblem: eta_only needs known_p sampled on the grid");
    }
    if (!eta_active_ && static_cast<int>(pb.known_eta.size()) != n_nodes) {
        throw std::invalid_argument(
            "ReconstructionProblem: p_only needs known_eta sampled on the grid");
    }

    if (p_active_) {
        p_val_ = p_spline_.value_matrix(pb.grid);
        p_d1_ = p_spline_.derivative_matrix(pb.grid);
        p_d2_ = p_spline_.second_derivative_matrix(pb.grid);
        // Clamped end conditions: value and slope at t=0 are carried by the
        // first two coefficients, which the known initial data pin.
        p_coef0_ = pb.q0;
        p_coef1_ = pb.q0 + pb.q1 * p_spline_.knot(4) / 3.0;
        const double bound = 1.0 - pb.delta;
        if (std::abs(p_coef0_) > bound + 1e-12 || std::abs(p_coef1_) > bound + 1e-12) {
            throw std::invalid_argument(
                "ReconstructionProblem: initial data incompatible with |p| <= 1 - delta");
        }
        n_free_p_ = p_spline_.size() - 2;
    }
    if (eta_active_) {
        eta_val_ = eta_spline_.value_matrix(pb.grid);
        eta_d1_ = eta_spline_.derivative_matrix(pb.grid);
        eta_coef0_ = pb.w0(1.0);
        n_free_eta_ = eta_spline_.size() - 1;
    }
    n_free_ = n_free_p_ + n_free_eta_;
}

Eigen::VectorXd ObservationEngine::full_p_coeffs(const Eigen::VectorXd& x) const {
    Eigen::VectorXd c(p_spline_.size());
    c[0] = p_coef0_;
    c[1] = p_coef1_;
    for (int i = 0; i < n_free_p_; ++i) { c[i + 2] = x[i]; }
    return c;
}

Eigen::VectorXd ObservationEngine::full_eta_coeffs(const Eigen::VectorXd& x) const {
    Eigen::VectorXd c(eta_spline_.size());
    c[0] = eta_coef0_;
    for (int i = 0; i < n_free_eta_; ++i) { c[i + 1] = x[n_free_p_ + i]; }
    return c;
}

InterfaceTrajectory ObservationEngine::decode_p(const Eigen::VectorXd& x) const {
    if (!p_active_) { return pb_.known_p; }
    const Eigen::VectorXd c = full_p_coeffs(x);
    InterfaceTrajectory traj;
    traj.grid = pb_.grid;
    traj.delta = pb_.delta;
    traj.bound_m = pb_.bound_m;
    const int n = pb_.grid.n_nodes();
    traj.p.resize(n);
    traj.p_dot.resize(n);
    traj.p_ddot.resize(n);
    const Eigen::VectorXd pv = p_val_ * c;
    const Eigen::VectorXd pd = p_d1_ * c;
    const Eigen::VectorXd pa = p_d2_ * c;
    for (int j = 0; j < n; ++j) {
        traj.p[j] = pv[j];
        traj.p_dot[j] = pd[j];
        traj.p_ddot[j] = pa[j];
    }
    return traj;
}

std::vector<double> ObservationEngine::decode_eta(const Eigen::VectorXd& x) const {
    if (!eta_active_) { return pb_.known_eta; }
    const Eigen::VectorXd c = full_eta_coeffs(x);
    const Eigen::VectorXd v = eta_val_ * c;
    return {v.data(), v.data() + v.size()};
}

bool ObservationEngine::box_feasible(const Eigen::VectorXd& x) const {
    if (!p_active_) { return true; }
    const double bound = 1.0 - pb_.delta + 1e-12;
    for (int i = 0; i < n_free_p_; ++i) {
        if (!(std::abs(x[i]) <= bound)) { return false; }
    }
    return true;
}

Eigen::VectorXd ObservationEngine::project(Eigen::VectorXd x) const {
    const double bound = 1.0 - pb_.delta;
    for (int i = 0; i < n_free_p_; ++i) { x[i] = std::clamp(x[i], -bound, bound); }
    return x;
}

ObservationEngine::Output ObservationEngine::evaluate(const Eigen::VectorXd& x) const {
    Output out;
    if (x.size() != n_free_) {
        throw std::invalid_argument("ObservationEngine: candidate size mismatch");
    }
    if (!box_feasible(x)) {
        out.ok = false;
        out.status = SolveStatus::margin_violation;
        return out;
    }
    PrescribedProblem fp;
    fp.grid = pb_.grid;
    fp.n_cells_left = pb_.n_cells_left;
    fp.n_cells_right = pb_.n_cells_right;
    fp.w0 = pb_.w0;
    fp.alpha = pb_.alpha;
    fp.eta = decode_eta(x);
    fp.traj = decode_p(x);
    const FsiSolution sol = solve_prescribed(fp);
    out.status = sol.status;
    if (sol.status != SolveStatus::ok) {
        out.ok = false;
        return out;
    }
    out.ok = true;
    out.beta_pred = sol.traces.beta;
    out.defect = jump_defect(sol);
    return out;
}

bool ObservationEngine::residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const {
    const Output out = evaluate(x);
    if (!out.ok) { return false; }
    const int n = pb_.grid.n_nodes();
    const double dt = pb_.grid.dt();
    const bool with_jump = pb_.mu_jump > 0.0;
    int m = n;
    if (p_active_) { m += n; }
    if (eta_active_) { m += n; }
    if (with_jump) { m += n; }
    r.resize(m);

    const double w_misfit = std::sqrt(dt);
    int at = 0;
    for (int j = 0; j < n; ++j) { r[at++] = w_misfit * (out.beta_pred[j] - pb_.beta_obs[j]); }
    if (p_active_) {
        const double w = std::sqrt(pb_.lambda_p * dt);
        const Eigen::VectorXd pa = p_d2_ * full_p_coeffs(x);
        for (int j = 0; j < n; ++j) { r[at++] = w * pa[j]; }
    }
    if (eta_active_) {
        const double w = std::sqrt(pb_.lambda_eta * dt);
        const Eigen::VectorXd ed = eta_d1_ * full_eta_coeffs(x);
        for (int j = 0; j < n; ++j) { r[at++] = w * ed[j]; }
    }
    if (with_jump) {
        const double w = std::sqrt(2.0 * pb_.mu_jump * dt);
        for (int j = 0; j < n; ++j) { r[at++] = w * out.defect[j]; }
    }
    return true;
}

Eigen::VectorXd ObservationEngine::make_init(double p_value, double eta_value) const {
    Eigen::VectorXd x(n_free_);
    const double bound = 1.0 - pb_.delta;
    for (int i = 0; i < n_free_p_; ++i) { x[i] = std::clamp(p_value, -bound, bound); }
    for (int i = 0; i < n_free_eta_; ++i) { x[n_free_p_ + i] = eta_value; }
    return x;
}

double objective(const ReconstructionProblem& pb, const Eigen::VectorXd& candidate) {
    const ObservationEngine engine(pb);
    Eigen::VectorXd r;
    if (!engine.residual(candidate, r)) { return pb.sentinel; }
    return engine.objective_of_residual(r);
}

ObservationEngine::Output observation_operator(const ReconstructionProblem& pb,
                                               const Eigen::VectorXd& candidate) {
    const ObservationEngine engine(pb);
    return engine.evaluate(candidate);
}

ReconstructionResult reconstruct(const ReconstructionProblem& pb, const Eigen::VectorXd& init) {
    const ObservationEngine engine(pb);
    const int nfree = engine.n_free();
    const double dt = pb.grid.dt();
    const int n_nodes = pb.grid.n_nodes();

    ReconstructionResult res;
    Eigen::VectorXd x = engine.project(init);
    Eigen::VectorXd r;
    bool cur_ok = engine.residual(x, r);
    bool any_ok = cur_ok;
    double j_cur = cur_ok ? engine.objective_of_residual(r) : pb.sentinel;
    if (cur_ok) { res.objective_history.push_back(j_cur); }

    double nu = 1e-3;
    int iter = 0;
    const double bound = 1.0 - pb.delta;
    while (iter < pb.max_iter && cur_ok) {
        ++iter;
        // Forward-difference Jacobian; a column that hits the failure sentinel
        // is retried from the other side, then zeroed.
        Eigen::MatrixXd jac(r.size(), nfree);
        Eigen::VectorXd rp;
        for (int i = 0; i < nfree; ++i) {
            double h = std::max(pb.fd_step_rel * std::abs(x[i]), pb.fd_step_abs);
            if (i < engine.n_free_p() && x[i] + h > bound) { h = -h; }
            Eigen::VectorXd xp = x;
            xp[i] += h;
            bool ok = engine.residual(xp, rp);
            if (!ok) {
                h = -h;
                xp = x;
                xp[i] += h;
                ok = engine.residual(xp, rp);
            }
            if (ok) {
                jac.col(i) = (rp - r) / h;
                any_ok = true;
            } else {
                jac.col(i).setZero();
            }
        }

        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.lpNorm<Eigen::Infinity>() < pb.grad_tol) {
            res.converged = true;
            break;
        }
        const Eigen::MatrixXd normal = jac.transpose() * jac;

        bool accepted = false;
        while (!accepted && nu < 1e14) {
            Eigen::MatrixXd damped = normal;
            for (int i = 0; i < nfree; ++i) {
                damped(i, i) += nu * std::max(normal(i, i), 1e-12);
            }
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const Eigen::VectorXd xt = engine.project(x + step);
            Eigen::VectorXd rt;
            const bool ok_t = engine.residual(xt, rt);
            const double j_t = ok_t ? engine.objective_of_residual(rt) : pb.sentinel;
            if (ok_t && j_t < j_cur) {
                const double step_norm = (xt - x).norm();
                x = xt;
                r = rt;
                j_cur = j_t;
                any_ok = true;
                res.objective_history.push_back(j_cur);
                nu = std::max(nu / 3.0, 1e-14);
                accepted = true;
                if (step_norm < pb.step_tol) { res.converged = true; }
            } else {
                nu *= 2.0;
            }
        }
        if (!accepted || res.converged) { break; }
    }

    res.iterations = iter;
    res.unidentifiable = !any_ok;
    res.p_hat = engine.decode_p(x);
    res.eta_hat = engine.decode_eta(x);
    res.final_objective = j_cur;
    const ObservationEngine::Output out = engine.evaluate(x);
    if (out.ok) {
        double acc = 0.0;
        for (int j = 0; j < n_nodes; ++j) {
            const double d = out.beta_pred[j] - pb.beta_obs[j];
            acc += d * d;
        }
        res.final_misfit = std::sqrt(dt * acc);
    } else {
        res.final_misfit = pb.sentinel;
        res.converged = false;
    }
    return res;
}

}  // namespace fsilab
