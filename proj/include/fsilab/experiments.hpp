#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fsilab/fsi.hpp"
#include "fsilab/noise.hpp"
#include "fsilab/reconstruction.hpp"

namespace fsilab {

// sup over grid columns inside [band_lo, band_hi] of the time-L2 norms of the
// value and of its spatial derivative over [t_lo, t_hi].
double interior_trace_norm(const SideField& field, double band_lo, double band_hi, double t_lo,
                           double t_hi);

// Least-squares fit of err = K / |log(1/k)|^theta in log-log-log coordinates.
struct LogFit {
    double K = 0.0;
    double theta = 0.0;
    double residual = 0.0;
    bool valid = false;
};
LogFit fit_log_rate(const std::vector<std::pair<double, double>>& k_err);

// --- Interface-trace estimate probe ----------------------------------------
// Solves the lateral problem on a fixed prescribed domain, perturbs the
// interface Dirichlet data, calibrates the perturbation so the measured Cauchy
// discrepancy ||beta1 - beta2||_L2 matches each requested k, and records the
// interface-trace discrepancy. The difference of the two solutions satisfies
// the linear lateral equation whose Cauchy data has size k.
struct TraceEstimateRow {
    double k = 0.0;                    // requested data-discrepancy level
    double cauchy_discrepancy = 0.0;   // measured ||beta1-beta2||_L2(0,T)
    double trace_discrepancy = 0.0;    // sup_{[eps_t,T]} |u1 - u2| at the interface
};
struct TraceEstimateReport {
    std::vector<TraceEstimateRow> rows;
    LogFit fit;
    double eps_t = 0.0;
};
TraceEstimateReport trace_estimate_experiment(const PrescribedProblem& base,
                                              const std::vector<double>& k_list,
                                              double eps_t_fraction = 0.1);

// --- Anchor-point ratio probe -----------------------------------------------
struct AnchorRow {
    double t_bar = 0.0;
    double anchor_diff = 0.0;
    double ratio = 0.0;
    bool skipped = false;  // anchor difference below 1e-13
};
struct AnchorReport {
    std::vector<AnchorRow> rows;
    double sup_p_diff = 0.0;
    double cauchy_discrepancy = 0.0;  // measured ||beta1 - beta2||_L2
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    int valid_rows = 0;
};
// Perturbs only the initial particle data (q0 -> q0 + dq, q1 adjusted to keep
// w0 compatibility) and reports ||p1-p2||_inf / |p1(t_bar)-p2(t_bar)| on an
// anchor grid.
AnchorReport anchor_experiment(const FsiProblem& base, double dq, int n_anchors);

// --- Noise-stability sweep ---------------------------------------------------
struct SweepSetup {
    FsiProblem truth;  // coupled synthetic fixture; truth.eta is the eta truth
    UnknownSelector unknowns = UnknownSelector::p_and_eta;
    int p_basis = 10;
    int eta_basis = 8;
    double lambda_p = 1e-6;
    double lambda_eta = 1e-6;
    double mu_jump = 1.0;
    int max_iter = 200;
    std::vector<double> eps_list;
    std::vector<std::uint64_t> seeds;
    NoiseModel::Kind kind = NoiseModel::Kind::gaussian;
    double eps_t_fraction = 0.1;
    int threads = 0;  // 0 = hardware concurrency
};

struct SweepRow {
    double eps = 0.0;
    std::uint64_t seed = 0;
    double err_p = 0.0;
    double err_eta = 0.0;
    double misfit = 0.0;
    int iters = 0;
    bool converged = false;
};

struct SweepReport {
    std::vector<SweepRow> rows;  // sorted by (eps, seed)
    std::vector<std::pair<double, double>> median_err_p;    // (eps, median)
    std::vector<std::pair<double, double>> median_err_eta;  // (eps, median)
    LogFit fit_p;
    LogFit fit_eta;
    double eps_t = 0.0;
};

SweepReport stability_sweep(const SweepSetup& setup);

// --- Convergence ladders -----------------------------------------------------
// Frozen-domain error against the Cole-Hopf closed form (a = pi, A = 2):
// stationary centered interface, reference interval equal to the physical
// left half, solution started at time t0. Returns the L-inf error at t0 + T.
double frozen_cole_hopf_error(int n_cells, int n_steps, double T, double t0);

// log2 ratios of consecutive errors for a halving ladder.
std::vector<double> observed_orders(const std::vector<double>& errors);

// sup over common nodes of |p_coarse - p_fine| between two solved trajectories
// whose step counts differ by a power of two.
double trajectory_difference(const InterfaceTrajectory& coarse, const InterfaceTrajectory& fine);

}  // namespace fsilab
