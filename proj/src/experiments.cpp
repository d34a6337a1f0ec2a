#include "fsilab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "fsilab/cole_hopf.hpp"

namespace fsilab {

namespace {

// Trapezoidal time-L2 norm of a sampled series over node range [j0, j1].
double time_l2(const std::vector<double>& v, double dt, int j0, int j1) {
    double acc = 0.0;
    for (int j = j0; j <= j1; ++j) {
        const double w = (j == j0 || j == j1) ? 0.5 : 1.0;
        acc += w * v[j] * v[j];
    }
    return std::sqrt(acc * dt);
}

double series_l2_diff(const std::vector<double>& a, const std::vector<double>& b, double dt) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        const double w = (j == 0 || j + 1 == a.size()) ? 0.5 : 1.0;
        acc += w * d * d;
    }
    return std::sqrt(acc * dt);
}

int first_node_at_or_after(const TimeGrid& grid, double t) {
    const int j = static_cast<int>(std::ceil(t / grid.dt() - 1e-9));
    return std::clamp(j, 0, grid.n_steps);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n == 0) { return 0.0; }
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double interior_trace_norm(const SideField& field, double band_lo, double band_hi, double t_lo,
                           double t_hi) {
    if (band_hi < band_lo) { throw std::invalid_argument("interior_trace_norm: empty band"); }
    const double h = field.h();
    const double dt = field.grid.dt();
    std::vector<int> cols;
    for (int j = 0; j <= field.n_cells; ++j) {
        const double y = field.y(j);
        if (y >= band_lo - 1e-12 && y <= band_hi + 1e-12) { cols.push_back(j); }
    }
    if (cols.empty()) { throw std::invalid_argument("interior_trace_norm: empty band"); }
    const int k0 = first_node_at_or_after(field.grid, t_lo);
    int k1 = field.grid.n_steps;
    while (k1 > k0 && field.grid.t(k1) > t_hi + 1e-12) { --k1; }
    if (k1 <= k0) { throw std::invalid_argument("interior_trace_norm: empty time window"); }

    double sup = 0.0;
    std::vector<double> val(k1 - k0 + 1), der(k1 - k0 + 1);
    for (int j : cols) {
        for (int k = k0; k <= k1; ++k) {
            val[k - k0] = field.at(k, j);
            double d;
            if (j == 0) {
                d = (-3.0 * field.at(k, 0) + 4.0 * field.at(k, 1) - field.at(k, 2)) / (2.0 * h);
            } else if (j == field.n_cells) {
                d = (3.0 * field.at(k, j) - 4.0 * field.at(k, j - 1) + field.at(k, j - 2)) /
                    (2.0 * h);
            } else {
                d = (field.at(k, j + 1) - field.at(k, j - 1)) / (2.0 * h);
            }
            der[k - k0] = d;
        }
        const double nv = time_l2(val, dt, 0, k1 - k0);
        const double nd = time_l2(der, dt, 0, k1 - k0);
        sup = std::max(sup, nv + nd);
    }
    return sup;
}

LogFit fit_log_rate(const std::vector<std::pair<double, double>>& k_err) {
    LogFit fit;
    std::vector<double> xs, ys;
    for (const auto& [k, err] : k_err) {
        if (k > 0.0 && k < 1.0 && err > 0.0) {
            xs.push_back(std::log(std::log(1.0 / k)));
            ys.push_back(std::log(err));
        }
    }
    const std::size_t n = xs.size();
    if (n < 2) { return fit; }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14) { return fit; }
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    fit.theta = -slope;
    fit.K = std::exp(intercept);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = intercept + slope * xs[i];
        acc += (ys[i] - pred) * (ys[i] - pred);
    }
    fit.residual = std::sqrt(acc / n);
    fit.valid = true;
    return fit;
}

TraceEstimateReport trace_estimate_experiment(const PrescribedProblem& base,
                                              const std::vector<double>& k_list,
                                              double eps_t_fraction) {
    for (double k : k_list) {
        if (k >= 1.0) {
            throw std::invalid_argument("trace_estimate_experiment: requires k < 1");
        }
        if (k < 0.0) {
            throw std::invalid_argument("trace_estimate_experiment: requires k >= 0");
        }
    }
    const FsiSolution sol1 = solve_prescribed(base);
    if (sol1.partial()) {
        throw std::runtime_error("trace_estimate_experiment: base solve failed: " +
                                 std::string(to_string(sol1.status)));
    }
    const TimeGrid& grid = base.grid;
    const int n = grid.n_nodes();
    const double dt = grid.dt();
    const std::vector<double>& base_iface =
        base.interface_value.empty() ? base.traj.p_dot : base.interface_value;

    // Perturbation profile, zero at t = 0 so the initial data stay shared.
    std::vector<double> shape(n);
    for (int j = 0; j < n; ++j) { shape[j] = std::sin(std::numbers::pi * grid.t(j) / grid.T); }

    const auto solve_with_amplitude = [&](double s) {
        PrescribedProblem pb = base;
        pb.interface_value.resize(n);
        for (int j = 0; j < n; ++j) { pb.interface_value[j] = base_iface[j] + s * shape[j]; }
        return solve_prescribed(pb);
    };

    // Calibrate the Cauchy response once, in the small-perturbation regime.
    const double s_ref = 1e-3;
    const FsiSolution probe = solve_with_amplitude(s_ref);
    if (probe.partial()) {
        throw std::runtime_error("trace_estimate_experiment: probe solve failed");
    }
    const double d_ref = series_l2_diff(probe.traces.beta, sol1.traces.beta, dt);
    if (!(d_ref > 0.0)) {
        throw std::runtime_error("trace_estimate_experiment: degenerate Cauchy response");
    }

    TraceEstimateReport report;
    report.eps_t = eps_t_fraction * grid.T;
    const int j0 = first_node_at_or_after(grid, report.eps_t);
    const int nl = base.n_cells_left;
    for (double k : k_list) {
        TraceEstimateRow row;
        row.k = k;
        if (k == 0.0) {
            const FsiSolution sol2 = solve_with_amplitude(0.0);
            row.cauchy_discrepancy = series_l2_diff(sol2.traces.beta, sol1.traces.beta, dt);
            for (int j = j0; j < n; ++j) {
                row.trace_discrepancy = std::max(
                    row.trace_discrepancy, std::abs(sol2.left.at(j, nl) - sol1.left.at(j, nl)));
            }
        } else {
            const double s = s_ref * k / d_ref;
            const FsiSolution sol2 = solve_with_amplitude(s);
            if (sol2.partial()) {
                throw std::runtime_error("trace_estimate_experiment: perturbed solve failed");
            }
            row.cauchy_discrepancy = series_l2_diff(sol2.traces.beta, sol1.traces.beta, dt);
            for (int j = j0; j < n; ++j) {
                row.trace_discrepancy = std::max(
                    row.trace_discrepancy, std::abs(sol2.left.at(j, nl) - sol1.left.at(j, nl)));
            }
        }
        report.rows.push_back(row);
    }

    std::vector<std::pair<double, double>> pts;
    for (const TraceEstimateRow& row : report.rows) {
        if (row.k > 0.0) { pts.emplace_back(row.cauchy_discrepancy, row.trace_discrepancy); }
    }
    report.fit = fit_log_rate(pts);
    return report;
}

AnchorReport anchor_experiment(const FsiProblem& base, double dq, int n_anchors) {
    if (n_anchors < 1) { throw std::invalid_argument("anchor_experiment: need anchors"); }
    FsiProblem perturbed = base;
    perturbed.q0 = base.q0 + dq;
    perturbed.q1 = base.w0(perturbed.q0);  // keep the kinematic compatibility

    const FsiSolution s1 = solve_forward(base);
    const FsiSolution s2 = solve_forward(perturbed);
    if (s1.partial() || s2.partial()) {
        throw std::runtime_error("anchor_experiment: forward solve failed");
    }
    const TimeGrid& grid = base.grid;

    AnchorReport report;
    report.cauchy_discrepancy = series_l2_diff(s1.traces.beta, s2.traces.beta, grid.dt());
    for (int j = 0; j < grid.n_nodes(); ++j) {
        report.sup_p_diff = std::max(report.sup_p_diff, std::abs(s1.traj.p[j] - s2.traj.p[j]));
    }
    report.min_ratio = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n_anchors; ++i) {
        AnchorRow row;
        const double t_bar = grid.T * i / (n_anchors + 1);
        const int j = first_node_at_or_after(grid, t_bar);
        row.t_bar = grid.t(j);
        row.anchor_diff = std::abs(s1.traj.p[j] - s2.traj.p[j]);
        if (row.anchor_diff < 1e-13) {
            row.skipped = true;
        } else {
            row.ratio = report.sup_p_diff / row.anchor_diff;
            report.max_ratio = std::max(report.max_ratio, row.ratio);
            report.min_ratio = std::min(report.min_ratio, row.ratio);
            ++report.valid_rows;
        }
        report.rows.push_back(row);
    }
    if (report.valid_rows == 0) { report.min_ratio = 0.0; }
    return report;
}

SweepReport stability_sweep(const SweepSetup& setup) {
    const FsiSolution truth = solve_forward(setup.truth);
    if (truth.partial()) {
        throw std::runtime_error("stability_sweep: truth solve failed: " +
                                 std::string(to_string(truth.status)));
    }
    const TimeGrid& grid = setup.truth.grid;
    const int n = grid.n_nodes();
    const double eps_t = setup.eps_t_fraction * grid.T;
    const int j0 = first_node_at_or_after(grid, eps_t);

    ReconstructionProblem base;
    base.grid = grid;
    base.n_cells_left = setup.truth.n_cells_left;
    base.n_cells_right = setup.truth.n_cells_right;
    base.alpha = truth.traces.alpha;
    base.w0 = setup.truth.w0;
    base.q0 = setup.truth.q0;
    base.q1 = setup.truth.q1;
    base.delta = setup.truth.delta;
    base.bound_m = setup.truth.bound_m;
    base.unknowns = setup.unknowns;
    base.p_basis = setup.p_basis;
    base.eta_basis = setup.eta_basis;
    base.lambda_p = setup.lambda_p;
    base.lambda_eta = setup.lambda_eta;
    base.mu_jump = setup.mu_jump;
    base.max_iter = setup.max_iter;
    if (setup.unknowns == UnknownSelector::eta_only) { base.known_p = truth.traj; }
    if (setup.unknowns == UnknownSelector::p_only) { base.known_eta = setup.truth.eta; }

    std::vector<std::pair<double, std::uint64_t>> tasks;
    std::vector<double> eps_sorted = setup.eps_list;
    std::sort(eps_sorted.begin(), eps_sorted.end());
    std::vector<std::uint64_t> seeds_sorted = setup.seeds;
    std::sort(seeds_sorted.begin(), seeds_sorted.end());
    for (double eps : eps_sorted) {
        for (std::uint64_t seed : seeds_sorted) { tasks.emplace_back(eps, seed); }
    }

    SweepReport report;
    report.eps_t = eps_t;
    report.rows.resize(tasks.size());

    const auto run_task = [&](std::size_t idx) {
        const auto [eps, seed] = tasks[idx];
        NoiseModel nm{setup.kind, eps, seed};
        ReconstructionProblem rp = base;
        rp.beta_obs = apply_noise(truth.traces.beta, nm);
        const ObservationEngine engine(rp);
        const Eigen::VectorXd init =
            engine.make_init(setup.truth.q0, setup.truth.w0 ? setup.truth.w0(1.0) : 0.0);
        const ReconstructionResult res = reconstruct(rp, init);

        SweepRow row;
        row.eps = eps;
        row.seed = seed;
        for (int j = j0; j < n; ++j) {
            if (setup.unknowns != UnknownSelector::eta_only) {
                row.err_p = std::max(row.err_p, std::abs(res.p_hat.p[j] - truth.traj.p[j]));
            }
            if (setup.unknowns != UnknownSelector::p_only) {
                row.err_eta =
                    std::max(row.err_eta, std::abs(res.eta_hat[j] - setup.truth.eta[j]));
            }
        }
        row.misfit = res.final_misfit;
        row.iters = res.iterations;
        row.converged = res.converged;
        report.rows[idx] = row;
    };

    int threads = setup.threads;
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads <= 0) { threads = 1; }
    }
    threads = std::min<int>(threads, static_cast<int>(tasks.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) { run_task(i); }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) { return; }
                    run_task(i);
                }
            });
        }
        for (std::thread& th : pool) { th.join(); }
    }

    std::vector<std::pair<double, double>> pts_p, pts_eta;
    for (double eps : eps_sorted) {
        std::vector<double> ep, ee;
        for (const SweepRow& row : report.rows) {
            if (row.eps == eps) {
                ep.push_back(row.err_p);
                ee.push_back(row.err_eta);
            }
        }
        report.median_err_p.emplace_back(eps, median(ep));
        report.median_err_eta.emplace_back(eps, median(ee));
        if (eps > 0.0) {
            pts_p.emplace_back(eps, median(ep));
            pts_eta.emplace_back(eps, median(ee));
        }
    }
    report.fit_p = fit_log_rate(pts_p);
    report.fit_eta = fit_log_rate(pts_eta);
    return report;
}

double frozen_cole_hopf_error(int n_cells, int n_steps, double T, double t0) {
    const ColeHopfSolution exact = ColeHopfSolution::make(1.0, 1, 2.0);
    const TimeGrid grid(T, n_steps);
    SideField field(Side::left, n_cells, grid);
    for (int j = 0; j <= n_cells; ++j) { field.at(0, j) = exact.value(field.y(j), t0); }

    const TransformedCoefficients coef = side_coefficients(Side::left, 0.0, 0.0, 0.5);
    for (int n = 0; n < n_steps; ++n) {
        StepInputs in;
        in.coef_old = coef;
        in.coef_new = coef;
        in.bc_lower = exact.value(0.0, t0 + grid.t(n + 1));
        in.bc_upper = exact.value(1.0, t0 + grid.t(n + 1));
        const StepOutcome o = advance_step(field, n, in);
        if (!o.ok()) {
            throw std::runtime_error("frozen_cole_hopf_error: step failure at level " +
                                     std::to_string(o.time_index));
        }
    }
    double err = 0.0;
    for (int j = 0; j <= n_cells; ++j) {
        err = std::max(err, std::abs(field.at(n_steps, j) - exact.value(field.y(j), t0 + T)));
    }
    return err;
}

std::vector<double> observed_orders(const std::vector<double>& errors) {
    std::vector<double> orders;
    for (std::size_t i = 1; i < errors.size(); ++i) {
        orders.push_back(std::log2(errors[i - 1] / errors[i]));
    }
    return orders;
}

double trajectory_difference(const InterfaceTrajectory& coarse, const InterfaceTrajectory& fine) {
    const int nc = coarse.grid.n_steps;
    const int nf = fine.grid.n_steps;
    if (nf % nc != 0) {
        throw std::invalid_argument("trajectory_difference: step counts must nest");
    }
    const int stride = nf / nc;
    double d = 0.0;
    for (int j = 0; j <= nc; ++j) {
        d = std::max(d, std::abs(coarse.p[j] - fine.p[j * stride]));
    }
    return d;
}

}  // namespace fsilab
