#pragma once

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fsilab/bspline.hpp"
#include "fsilab/fsi.hpp"

namespace fsilab {

enum class UnknownSelector { p_only, eta_only, p_and_eta };

UnknownSelector unknowns_from_string(const std::string& s);
const char* to_string(UnknownSelector u);

// Output-least-squares reconstruction of the interface trajectory and/or the
// far boundary trace from the x = -1 Cauchy pair. Unknowns are clamped cubic
// B-spline coefficient vectors; the leading p coefficients are pinned so the
// candidate honors the known initial data p(0) = q0, p'(0) = q1, and the
// leading eta coefficient so eta(0) = w0(1).
struct ReconstructionProblem {
    TimeGrid grid;
    int n_cells_left = 64;
    int n_cells_right = 64;
    std::vector<double> alpha;
    std::vector<double> beta_obs;
    std::function<double(double)> w0;
    double q0 = 0.0;
    double q1 = 0.0;
    double delta = 0.1;
    double bound_m = 10.0;

    UnknownSelector unknowns = UnknownSelector::eta_only;
    int p_basis = 10;
    int eta_basis = 8;
    double lambda_p = 1e-6;    // weight on the discrete p'' seminorm
    double lambda_eta = 1e-6;  // weight on the discrete eta' seminorm
    double mu_jump = 1.0;      // weight on the Newton-law defect

    InterfaceTrajectory known_p;    // used when unknowns == eta_only
    std::vector<double> known_eta;  // used when unknowns == p_only

    int max_iter = 200;
    double grad_tol = 1e-9;
    double step_tol = 1e-10;
    double fd_step_rel = 1e-6;
    double fd_step_abs = 1e-8;
    double sentinel = 1e50;
};

struct ReconstructionResult {
    InterfaceTrajectory p_hat;
    std::vector<double> eta_hat;
    std::vector<double> objective_history;  // accepted iterations, non-increasing
    double final_objective = 0.0;
    double final_misfit = 0.0;  // sqrt(dt * sum (beta_pred - beta_obs)^2)
    int iterations = 0;
    bool converged = false;
    bool unidentifiable = false;  // every evaluation hit the failure sentinel
};

// Candidate decoding and forward evaluation shared by the objective, the
// finite-difference Jacobian and the optimizer loop.
class ObservationEngine {
  public:
    explicit ObservationEngine(const ReconstructionProblem& problem);

    int n_free() const { return n_free_; }
    int n_free_p() const { return n_free_p_; }

    InterfaceTrajectory decode_p(const Eigen::VectorXd& x) const;
    std::vector<double> decode_eta(const Eigen::VectorXd& x) const;

    // true when every decoded p spline coefficient respects |c| <= 1 - delta.
    bool box_feasible(const Eigen::VectorXd& x) const;
    Eigen::VectorXd project(Eigen::VectorXd x) const;

    struct Output {
        bool ok = false;
        SolveStatus status = SolveStatus::ok;
        std::vector<double> beta_pred;
        std::vector<double> defect;  // jump minus candidate p''
    };
    Output evaluate(const Eigen::VectorXd& x) const;

    // Stacked weighted residual; ok=false marks a sentinel evaluation.
    bool residual(const Eigen::VectorXd& x, Eigen::VectorXd& r) const;
    double objective_of_residual(const Eigen::VectorXd& r) const { return 0.5 * r.squaredNorm(); }

    Eigen::VectorXd make_init(double p_value, double eta_value) const;

    const CubicBSplineBasis& p_spline() const { return p_spline_; }
    const CubicBSplineBasis& eta_spline() const { return eta_spline_; }

  private:
    const ReconstructionProblem& pb_;
    CubicBSplineBasis p_spline_;
    CubicBSplineBasis eta_spline_;
    Eigen::MatrixXd p_val_, p_d1_, p_d2_;
    Eigen::MatrixXd eta_val_, eta_d1_;
    bool p_active_ = false;
    bool eta_active_ = false;
    int n_free_p_ = 0;
    int n_free_eta_ = 0;
    int n_free_ = 0;
    double p_coef0_ = 0.0;  // pinned: p(0) = q0
    double p_coef1_ = 0.0;  // pinned: p'(0) = q1
    double eta_coef0_ = 0.0;  // pinned: eta(0) = w0(1)

    Eigen::VectorXd full_p_coeffs(const Eigen::VectorXd& x) const;
    Eigen::VectorXd full_eta_coeffs(const Eigen::VectorXd& x) const;
};

double objective(const ReconstructionProblem& problem, const Eigen::VectorXd& candidate);

ObservationEngine::Output observation_operator(const ReconstructionProblem& problem,
                                               const Eigen::VectorXd& candidate);

// Projected Levenberg-Marquardt with forward-difference Jacobian.
ReconstructionResult reconstruct(const ReconstructionProblem& problem,
                                 const Eigen::VectorXd& init);

}  // namespace fsilab
