#include "fsilab/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "fsilab/cole_hopf.hpp"
#include "fsilab/config.hpp"
#include "fsilab/csv.hpp"
#include "fsilab/experiments.hpp"
#include "fsilab/reconstruction.hpp"

namespace fsilab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

fs::path prepare_out_dir(const RunConfig& cfg, const CommandOptions& opts) {
    const fs::path dir = opts.out_dir_override.empty() ? fs::path(cfg.out_dir)
                                                       : fs::path(opts.out_dir_override);
    fs::create_directories(dir);
    return dir;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    f << j.dump(2) << '\n';
}

void emit_plot_script(const fs::path& dir) {
    std::ofstream f(dir / "plot.py");
    f << "#!/usr/bin/env python3\n"
         "\"\"\"Plot every CSV in this directory: each numeric column against the first.\"\"\"\n"
         "import csv\n"
         "import glob\n"
         "import os\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "here = os.path.dirname(os.path.abspath(__file__))\n"
         "for path in sorted(glob.glob(os.path.join(here, \"*.csv\"))):\n"
         "    with open(path) as fh:\n"
         "        rows = list(csv.reader(fh))\n"
         "    if len(rows) < 2:\n"
         "        continue\n"
         "    header, data = rows[0], rows[1:]\n"
         "    cols = list(zip(*data))\n"
         "    try:\n"
         "        x = [float(v) for v in cols[0]]\n"
         "    except ValueError:\n"
         "        continue\n"
         "    fig, ax = plt.subplots(figsize=(7, 4))\n"
         "    for name, col in zip(header[1:], cols[1:]):\n"
         "        try:\n"
         "            ax.plot(x, [float(v) for v in col], label=name)\n"
         "        except ValueError:\n"
         "            continue\n"
         "    ax.set_xlabel(header[0])\n"
         "    ax.legend(loc=\"best\", fontsize=8)\n"
         "    ax.set_title(os.path.basename(path))\n"
         "    fig.tight_layout()\n"
         "    fig.savefig(path.replace(\".csv\", \".png\"), dpi=130)\n"
         "    plt.close(fig)\n";
}

void write_trace_csv(const fs::path& path, const FsiSolution& sol, int precision) {
    const int n = sol.levels_complete();
    std::vector<std::vector<std::string>> rows;
    rows.reserve(n);
    for (int j = 0; j < n; ++j) {
        rows.push_back({format_double(sol.traj.grid.t(j), precision),
                        format_double(sol.traj.p[j], precision),
                        format_double(sol.traj.p_dot[j], precision),
                        format_double(sol.traj.p_ddot[j], precision),
                        format_double(sol.traces.alpha[j], precision),
                        format_double(sol.traces.beta[j], precision),
                        format_double(sol.traces.eta[j], precision),
                        format_double(sol.traces.eta_flux[j], precision),
                        format_double(sol.traces.jump[j], precision)});
    }
    write_csv(path.string(),
              {"t", "p", "p_dot", "p_ddot", "alpha", "beta", "eta", "eta_flux", "jump"}, rows);
}

int sweep_threads_from_env() {
    const char* env = std::getenv("FSILAB_THREADS");
    if (env == nullptr) { return 0; }
    const int v = std::atoi(env);
    return v > 0 ? v : 1;
}

// Exit-code policy shared by all subcommands.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "solver abort: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

struct TwinData {
    std::vector<double> alpha;
    std::vector<double> beta_obs;
    InterfaceTrajectory p_true;      // available in twin mode (or from data csv)
    std::vector<double> eta_true;    // available in twin mode
    bool have_truth = false;
};

TwinData make_inverse_data(const RunConfig& cfg, const FsiProblem& pb,
                           const UnknownSelector unknowns) {
    TwinData data;
    if (cfg.twin) {
        if (unknowns == UnknownSelector::p_only) {
            if (!cfg.has_truth_p) {
                throw ConfigError("inverse.truth_p is required for a p_only twin experiment");
            }
            PrescribedProblem pp;
            pp.grid = pb.grid;
            pp.n_cells_left = pb.n_cells_left;
            pp.n_cells_right = pb.n_cells_right;
            pp.w0 = pb.w0;
            pp.alpha = pb.alpha;
            pp.eta = pb.eta;
            pp.traj = trajectory_from_preset(cfg.truth_p, pb.grid, pb.delta, pb.bound_m);
            const FsiSolution sol = solve_prescribed(pp);
            if (sol.partial()) {
                throw std::runtime_error("twin data generation failed: " +
                                         std::string(to_string(sol.status)));
            }
            data.alpha = sol.traces.alpha;
            data.beta_obs = sol.traces.beta;
            data.p_true = pp.traj;
            data.eta_true = pb.eta;
        } else {
            const FsiSolution sol = solve_forward(pb);
            if (sol.partial()) {
                throw std::runtime_error("twin data generation failed: " +
                                         std::string(to_string(sol.status)));
            }
            data.alpha = sol.traces.alpha;
            data.beta_obs = sol.traces.beta;
            data.p_true = sol.traj;
            data.eta_true = pb.eta;
        }
        data.have_truth = true;
        return data;
    }

    if (cfg.data_csv.empty()) {
        throw ConfigError("inverse.data_csv is required when inverse.twin is false");
    }
    CsvTable table;
    try {
        table = read_csv(cfg.data_csv);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    const int n = pb.grid.n_nodes();
    if (static_cast<int>(table.rows.size()) != n) {
        throw ConfigError("data csv row count does not match the configured time grid");
    }
    for (const char* col : {"t", "alpha", "beta"}) {
        if (table.column(col) < 0) {
            throw ConfigError(std::string("data csv is missing column '") + col + "'");
        }
    }
    const std::vector<double> t = table.column_values("t");
    for (int j = 0; j < n; ++j) {
        if (std::abs(t[j] - pb.grid.t(j)) > 1e-9 * std::max(1.0, pb.grid.T)) {
            throw ConfigError("data csv time column does not match the configured grid");
        }
    }
    data.alpha = table.column_values("alpha");
    data.beta_obs = table.column_values("beta");
    if (unknowns == UnknownSelector::eta_only) {
        for (const char* col : {"p", "p_dot", "p_ddot"}) {
            if (table.column(col) < 0) {
                throw ConfigError(std::string("data csv is missing column '") + col +
                                  "' needed for a known trajectory");
            }
        }
        data.p_true.grid = pb.grid;
        data.p_true.delta = pb.delta;
        data.p_true.bound_m = pb.bound_m;
        data.p_true.p = table.column_values("p");
        data.p_true.p_dot = table.column_values("p_dot");
        data.p_true.p_ddot = table.column_values("p_ddot");
    }
    if (unknowns == UnknownSelector::p_only) {
        if (table.column("eta") < 0) {
            throw ConfigError("data csv is missing column 'eta' needed as known data");
        }
        data.eta_true = table.column_values("eta");
    }
    return data;
}

}  // namespace

int cmd_forward(const CommandOptions& opts) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(opts.config_path);
        const fs::path dir = prepare_out_dir(cfg, opts);
        const FsiProblem pb = build_problem(cfg);

        const double t0 = now_ms();
        const FsiSolution sol = solve_forward(pb);
        const double wall = now_ms() - t0;

        write_trace_csv(dir / "forward_trace.csv", sol, cfg.precision);

        double max_abs_p = 0.0;
        double max_dev_q0 = 0.0;
        for (int j = 0; j < sol.levels_complete(); ++j) {
            max_abs_p = std::max(max_abs_p, std::abs(sol.traj.p[j]));
            max_dev_q0 = std::max(max_dev_q0, std::abs(sol.traj.p[j] - pb.q0));
        }
        json summary = {{"status", to_string(sol.status)},
                        {"partial", sol.partial()},
                        {"levels_complete", sol.levels_complete()},
                        {"max_abs_p", max_abs_p},
                        {"max_abs_p_minus_q0", max_dev_q0},
                        {"margin", (1.0 - pb.delta) - max_abs_p},
                        {"jump_consistency_defect", check_jump_consistency(sol)},
                        {"wall_time_ms", wall}};
        write_json(dir / "summary.json", summary);
        if (opts.emit_plotscript) { emit_plot_script(dir); }
        if (sol.partial()) {
            std::cerr << "solver abort: " << to_string(sol.status) << " at level "
                      << sol.fail_index << " (partial trace written)\n";
            return 3;
        }
        return 0;
    });
}

int cmd_inverse(const CommandOptions& opts) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(opts.config_path);
        const fs::path dir = prepare_out_dir(cfg, opts);
        const FsiProblem pb = build_problem(cfg);
        const UnknownSelector unknowns = unknowns_from_string(cfg.unknowns);
        const TwinData data = make_inverse_data(cfg, pb, unknowns);

        ReconstructionProblem rp;
        rp.grid = pb.grid;
        rp.n_cells_left = pb.n_cells_left;
        rp.n_cells_right = pb.n_cells_right;
        rp.alpha = data.alpha;
        rp.beta_obs = data.beta_obs;
        rp.w0 = pb.w0;
        rp.q0 = pb.q0;
        rp.q1 = pb.q1;
        rp.delta = pb.delta;
        rp.bound_m = pb.bound_m;
        rp.unknowns = unknowns;
        rp.p_basis = cfg.p_knots;
        rp.eta_basis = cfg.eta_knots;
        rp.lambda_p = cfg.lambda_p;
        rp.lambda_eta = cfg.lambda_eta;
        rp.mu_jump = cfg.mu_jump;
        rp.max_iter = cfg.max_iter;
        rp.grad_tol = cfg.grad_tol;
        rp.step_tol = cfg.step_tol;
        if (unknowns == UnknownSelector::eta_only) { rp.known_p = data.p_true; }
        if (unknowns == UnknownSelector::p_only) { rp.known_eta = data.eta_true; }

        const ObservationEngine engine(rp);
        const Eigen::VectorXd init = engine.make_init(pb.q0, 0.0);
        const double t0 = now_ms();
        const ReconstructionResult res = reconstruct(rp, init);
        const double wall = now_ms() - t0;

        const int n = pb.grid.n_nodes();
        std::vector<std::vector<std::string>> rows;
        rows.reserve(n);
        for (int j = 0; j < n; ++j) {
            rows.push_back({format_double(pb.grid.t(j), cfg.precision),
                            format_double(res.p_hat.p[j], cfg.precision),
                            format_double(res.p_hat.p_dot[j], cfg.precision),
                            format_double(res.p_hat.p_ddot[j], cfg.precision),
                            format_double(res.eta_hat[j], cfg.precision)});
        }
        write_csv((dir / "recon_series.csv").string(),
                  {"t", "p_hat", "p_hat_dot", "p_hat_ddot", "eta_hat"}, rows);

        std::vector<std::vector<std::string>> hist;
        for (std::size_t i = 0; i < res.objective_history.size(); ++i) {
            hist.push_back({std::to_string(i),
                            format_double(res.objective_history[i], cfg.precision)});
        }
        write_csv((dir / "objective_history.csv").string(), {"iter", "objective"}, hist);

        json summary = {{"converged", res.converged},
                        {"unidentifiable", res.unidentifiable},
                        {"iterations", res.iterations},
                        {"final_misfit", res.final_misfit},
                        {"final_objective", res.final_objective},
                        {"unknowns", to_string(unknowns)},
                        {"wall_time_ms", wall}};
        if (data.have_truth) {
            const double eps_t = cfg.eps_t_fraction * pb.grid.T;
            double err_p = 0.0, err_eta = 0.0, sup_p = 0.0, sup_eta = 0.0;
            for (int j = 0; j < n; ++j) {
                if (pb.grid.t(j) + 1e-12 < eps_t) { continue; }
                err_p = std::max(err_p, std::abs(res.p_hat.p[j] - data.p_true.p[j]));
                err_eta = std::max(err_eta, std::abs(res.eta_hat[j] - data.eta_true[j]));
                sup_p = std::max(sup_p, std::abs(data.p_true.p[j]));
                sup_eta = std::max(sup_eta, std::abs(data.eta_true[j]));
            }
            summary["eps_t"] = eps_t;
            summary["err_p"] = err_p;
            summary["err_eta"] = err_eta;
            summary["rel_err_p"] = sup_p > 0.0 ? err_p / sup_p : err_p;
            summary["rel_err_eta"] = sup_eta > 0.0 ? err_eta / sup_eta : err_eta;
        }
        write_json(dir / "summary.json", summary);
        if (opts.emit_plotscript) { emit_plot_script(dir); }
        return 0;
    });
}

int cmd_sweep(const CommandOptions& opts) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(opts.config_path);
        const fs::path dir = prepare_out_dir(cfg, opts);

        SweepSetup setup;
        setup.truth = build_problem(cfg);
        setup.unknowns = unknowns_from_string(cfg.unknowns);
        setup.p_basis = cfg.p_knots;
        setup.eta_basis = cfg.eta_knots;
        setup.lambda_p = cfg.lambda_p;
        setup.lambda_eta = cfg.lambda_eta;
        setup.mu_jump = cfg.mu_jump;
        setup.max_iter = cfg.max_iter;
        setup.eps_list = cfg.sweep_eps;
        setup.seeds = cfg.sweep_seeds;
        setup.kind = noise_kind_from_string(cfg.noise_kind);
        setup.eps_t_fraction = cfg.eps_t_fraction;
        setup.threads = sweep_threads_from_env();

        const double t0 = now_ms();
        const SweepReport report = stability_sweep(setup);
        const double wall = now_ms() - t0;

        std::vector<std::vector<std::string>> rows;
        for (const SweepRow& row : report.rows) {
            rows.push_back({format_double(row.eps, cfg.precision), std::to_string(row.seed),
                            format_double(row.err_p, cfg.precision),
                            format_double(row.err_eta, cfg.precision),
                            format_double(row.misfit, cfg.precision), std::to_string(row.iters),
                            row.converged ? "1" : "0"});
        }
        write_csv((dir / "sweep.csv").string(),
                  {"eps", "seed", "err_p", "err_eta", "misfit", "iters", "converged"}, rows);

        const auto fit_rows = [&](const LogFit& fit) {
            return std::vector<std::vector<std::string>>{
                {format_double(fit.K, cfg.precision), format_double(fit.theta, cfg.precision),
                 format_double(fit.residual, cfg.precision),
                 format_double(report.eps_t, cfg.precision)}};
        };
        write_csv((dir / "fit_summary_p.csv").string(), {"K", "theta", "fit_residual", "eps_t"},
                  fit_rows(report.fit_p));
        write_csv((dir / "fit_summary_eta.csv").string(),
                  {"K", "theta", "fit_residual", "eps_t"}, fit_rows(report.fit_eta));

        json med_p = json::array(), med_eta = json::array();
        for (const auto& [eps, m] : report.median_err_p) { med_p.push_back({eps, m}); }
        for (const auto& [eps, m] : report.median_err_eta) { med_eta.push_back({eps, m}); }
        json summary = {{"rows", report.rows.size()},
                        {"median_err_p", med_p},
                        {"median_err_eta", med_eta},
                        {"theta_p", report.fit_p.theta},
                        {"theta_eta", report.fit_eta.theta},
                        {"eps_t", report.eps_t},
                        {"wall_time_ms", wall}};
        write_json(dir / "summary.json", summary);
        if (opts.emit_plotscript) { emit_plot_script(dir); }
        return 0;
    });
}

int cmd_convergence(const CommandOptions& opts) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(opts.config_path);
        const fs::path dir = prepare_out_dir(cfg, opts);

        std::vector<std::vector<std::string>> rows;
        json summary;
        const double t0 = now_ms();

        {  // spatial ladder against the closed form, dt refined with h
            std::vector<double> errors;
            for (std::size_t i = 0; i < cfg.conv_spatial_cells.size(); ++i) {
                const int cells = cfg.conv_spatial_cells[i];
                const int steps = cfg.conv_spatial_step_factor * cells;
                errors.push_back(
                    frozen_cole_hopf_error(cells, steps, cfg.conv_T, cfg.conv_spatial_t0));
                const double order =
                    i == 0 ? 0.0 : std::log2(errors[i - 1] / errors[i]);
                rows.push_back({"frozen_spatial", std::to_string(i), std::to_string(cells),
                                std::to_string(steps), format_double(errors[i], cfg.precision),
                                format_double(order, cfg.precision)});
            }
            const std::vector<double> orders = observed_orders(errors);
            summary["spatial_min_order"] =
                orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
        }

        {  // temporal ladder at fixed space resolution, decayed initial time
            std::vector<double> errors;
            for (std::size_t i = 0; i < cfg.conv_temporal_steps.size(); ++i) {
                const int steps = cfg.conv_temporal_steps[i];
                errors.push_back(frozen_cole_hopf_error(cfg.conv_temporal_cells, steps,
                                                        cfg.conv_T, cfg.conv_temporal_t0));
                const double order =
                    i == 0 ? 0.0 : std::log2(errors[i - 1] / errors[i]);
                rows.push_back({"frozen_temporal", std::to_string(i),
                                std::to_string(cfg.conv_temporal_cells), std::to_string(steps),
                                format_double(errors[i], cfg.precision),
                                format_double(order, cfg.precision)});
            }
            const std::vector<double> orders = observed_orders(errors);
            summary["temporal_min_order"] =
                orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
        }

        {  // coupled self-convergence of the trajectory
            std::vector<InterfaceTrajectory> trajs;
            for (int cells : cfg.conv_coupled_cells) {
                RunConfig rung = cfg;
                rung.n_cells_left = cells;
                rung.n_cells_right = cells;
                rung.n_steps = cfg.conv_coupled_step_factor * cells;
                const FsiSolution sol = solve_forward(build_problem(rung));
                if (sol.partial()) {
                    throw std::runtime_error("convergence: coupled rung failed: " +
                                             std::string(to_string(sol.status)));
                }
                trajs.push_back(sol.traj);
            }
            std::vector<double> diffs;
            for (std::size_t i = 0; i + 1 < trajs.size(); ++i) {
                diffs.push_back(trajectory_difference(trajs[i], trajs[i + 1]));
                const double order =
                    i == 0 ? 0.0 : std::log2(diffs[i - 1] / diffs[i]);
                rows.push_back({"coupled_self", std::to_string(i),
                                std::to_string(cfg.conv_coupled_cells[i]),
                                std::to_string(cfg.conv_coupled_step_factor *
                                               cfg.conv_coupled_cells[i]),
                                format_double(diffs[i], cfg.precision),
                                format_double(order, cfg.precision)});
            }
            const std::vector<double> orders = observed_orders(diffs);
            summary["coupled_min_order"] =
                orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
            if (!diffs.empty()) { summary["coupled_coarse_diff"] = diffs.front(); }
        }

        write_csv((dir / "convergence.csv").string(),
                  {"ladder", "level", "n_cells", "n_steps", "error", "observed_order"}, rows);
        summary["wall_time_ms"] = now_ms() - t0;
        write_json(dir / "summary.json", summary);
        if (opts.emit_plotscript) { emit_plot_script(dir); }
        return 0;
    });
}

int cmd_oracle(const CommandOptions& opts) {
    return guarded([&]() -> int {
        const RunConfig cfg = load_config(opts.config_path);
        const fs::path dir = prepare_out_dir(cfg, opts);

        const auto pair =
            counterexample_pair(cfg.oracle_ell, cfg.oracle_n, cfg.oracle_k, cfg.oracle_offset);
        const ColeHopfSolution& u1 = pair.first;
        const ColeHopfSolution& u2 = pair.second;
        const double L1 = u1.domain_length;
        const double L2 = u2.domain_length;

        std::vector<std::vector<std::string>> rows;
        double max_cauchy_value = 0.0;
        double max_cauchy_flux = 0.0;
        double min_endpoint = std::numeric_limits<double>::infinity();
        double max_endpoint = 0.0;
        for (int i = 0; i <= cfg.oracle_samples; ++i) {
            const double t = cfg.oracle_t_max * i / cfg.oracle_samples;
            const auto e1 = u1.evaluate(0.0, t);
            const auto e2 = u2.evaluate(0.0, t);
            const double end1 = u1.value(L1, t);
            const double end2 = u2.value(L2, t);
            max_cauchy_value = std::max(max_cauchy_value, std::abs(e1.u - e2.u));
            max_cauchy_flux = std::max(max_cauchy_flux, std::abs(e1.u_x - e2.u_x));
            min_endpoint = std::min(min_endpoint, std::abs(end1 - end2));
            max_endpoint = std::max(max_endpoint, std::abs(end1 - end2));
            rows.push_back({format_double(t, cfg.precision), format_double(e1.u, cfg.precision),
                            format_double(e1.u_x, cfg.precision),
                            format_double(e2.u, cfg.precision),
                            format_double(e2.u_x, cfg.precision),
                            format_double(end1, cfg.precision),
                            format_double(end2, cfg.precision)});
        }
        write_csv((dir / "oracle_traces.csv").string(),
                  {"t", "u1_at0", "u1x_at0", "u2_at0", "u2x_at0", "u1_end", "u2_end"}, rows);

        json summary = {{"ell", L1},
                        {"L", L2},
                        {"a", u1.a},
                        {"max_cauchy_value_discrepancy", max_cauchy_value},
                        {"max_cauchy_flux_discrepancy", max_cauchy_flux},
                        {"min_endpoint_discrepancy", min_endpoint},
                        {"max_endpoint_discrepancy", max_endpoint}};
        write_json(dir / "summary.json", summary);
        if (opts.emit_plotscript) { emit_plot_script(dir); }
        return 0;
    });
}

}  // namespace fsilab
