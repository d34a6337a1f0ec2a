#include "fsilab/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fsilab {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; }
    }
    return line;
}

template <typename T>
T require(const json& j, const std::string& block, const std::string& key) {
    if (!j.contains(key)) {
        throw ConfigError("missing required key '" + block + "." + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for key '" + block + "." + key + "': " + e.what());
    }
}

template <typename T>
void read_opt(const json& j, const std::string& block, const std::string& key, T& out) {
    if (!j.contains(key)) { return; }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for key '" + block + "." + key + "': " + e.what());
    }
}

SignalPreset read_preset(const json& j, const std::string& block, const std::string& key,
                         const SignalPreset& fallback) {
    if (!j.contains(key)) { return fallback; }
    const json& p = j.at(key);
    if (!p.is_object()) {
        throw ConfigError("key '" + block + "." + key + "' must be an object");
    }
    SignalPreset out;
    out.name = "zero";
    if (p.contains("preset")) {
        out.name = p.at("preset").get<std::string>();
    }
    if (!preset_name_known(out.name)) {
        throw ConfigError("unknown preset '" + out.name + "' at '" + block + "." + key + "'");
    }
    for (auto it = p.begin(); it != p.end(); ++it) {
        if (it.key() == "preset") { continue; }
        if (it.key() == "coeffs") {
            out.coeffs = it.value().get<std::vector<double>>();
            continue;
        }
        if (!it.value().is_number()) {
            throw ConfigError("preset parameter '" + block + "." + key + "." + it.key() +
                              "' must be numeric");
        }
        out.params[it.key()] = it.value().get<double>();
    }
    return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) { throw ConfigError("cannot open config file '" + path + "'"); }
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in '" + path + "' near line " +
                          std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }

    RunConfig cfg;
    if (!root.contains("problem")) { throw ConfigError("missing required key 'problem'"); }
    const json& pr = root.at("problem");
    cfg.T = require<double>(pr, "problem", "T");
    if (!(cfg.T > 0.0)) { throw ConfigError("key 'problem.T' must be positive"); }
    read_opt(pr, "problem", "q0", cfg.q0);
    read_opt(pr, "problem", "q1", cfg.q1);
    read_opt(pr, "problem", "delta", cfg.delta);
    read_opt(pr, "problem", "bound_m", cfg.bound_m);
    read_opt(pr, "problem", "compat_tol", cfg.compat_tol);
    read_opt(pr, "problem", "coupling_iterations", cfg.coupling_iterations);
    read_opt(pr, "problem", "coupling_tol", cfg.coupling_tol);
    cfg.w0 = read_preset(pr, "problem", "w0", cfg.w0);
    cfg.alpha = read_preset(pr, "problem", "alpha", cfg.alpha);
    cfg.eta = read_preset(pr, "problem", "eta", cfg.eta);
    if (pr.contains("w0") && pr.at("w0").is_object()) {
        const json& w = pr.at("w0");
        if (w.contains("interface_fix")) {
            cfg.w0_interface_fix = w.at("interface_fix").get<bool>();
        }
        if (w.contains("fix_radius")) { cfg.w0_fix_radius = w.at("fix_radius").get<double>(); }
    }

    if (root.contains("discretization")) {
        const json& d = root.at("discretization");
        read_opt(d, "discretization", "n_cells_left", cfg.n_cells_left);
        read_opt(d, "discretization", "n_cells_right", cfg.n_cells_right);
        read_opt(d, "discretization", "n_steps", cfg.n_steps);
    }
    if (cfg.n_cells_left < 4 || cfg.n_cells_right < 4 || cfg.n_steps < 1) {
        throw ConfigError("discretization values must be positive (cells >= 4)");
    }

    if (root.contains("inverse")) {
        const json& iv = root.at("inverse");
        read_opt(iv, "inverse", "unknowns", cfg.unknowns);
        read_opt(iv, "inverse", "p_knots", cfg.p_knots);
        read_opt(iv, "inverse", "eta_knots", cfg.eta_knots);
        read_opt(iv, "inverse", "lambda_p", cfg.lambda_p);
        read_opt(iv, "inverse", "lambda_eta", cfg.lambda_eta);
        read_opt(iv, "inverse", "mu_jump", cfg.mu_jump);
        read_opt(iv, "inverse", "max_iter", cfg.max_iter);
        read_opt(iv, "inverse", "grad_tol", cfg.grad_tol);
        read_opt(iv, "inverse", "step_tol", cfg.step_tol);
        read_opt(iv, "inverse", "twin", cfg.twin);
        read_opt(iv, "inverse", "data_csv", cfg.data_csv);
        if (iv.contains("truth_p")) {
            cfg.truth_p = read_preset(iv, "inverse", "truth_p", cfg.truth_p);
            cfg.has_truth_p = true;
        }
        if (cfg.unknowns != "p_only" && cfg.unknowns != "eta_only" &&
            cfg.unknowns != "p_and_eta") {
            throw ConfigError("key 'inverse.unknowns' must be p_only, eta_only or p_and_eta");
        }
        if (cfg.p_knots < 4 || cfg.eta_knots < 4) {
            throw ConfigError("spline knot counts must be >= 4");
        }
    }

    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        read_opt(sw, "sweep", "eps", cfg.sweep_eps);
        read_opt(sw, "sweep", "seeds", cfg.sweep_seeds);
        read_opt(sw, "sweep", "noise", cfg.noise_kind);
        read_opt(sw, "sweep", "eps_t_fraction", cfg.eps_t_fraction);
        if (cfg.noise_kind != "gaussian" && cfg.noise_kind != "uniform") {
            throw ConfigError("key 'sweep.noise' must be gaussian or uniform");
        }
        for (double e : cfg.sweep_eps) {
            if (e < 0.0) { throw ConfigError("sweep eps values must be >= 0"); }
        }
    }

    if (root.contains("oracle")) {
        const json& orc = root.at("oracle");
        read_opt(orc, "oracle", "ell", cfg.oracle_ell);
        read_opt(orc, "oracle", "n", cfg.oracle_n);
        read_opt(orc, "oracle", "k", cfg.oracle_k);
        read_opt(orc, "oracle", "offset", cfg.oracle_offset);
        read_opt(orc, "oracle", "t_max", cfg.oracle_t_max);
        read_opt(orc, "oracle", "samples", cfg.oracle_samples);
    }

    if (root.contains("convergence")) {
        const json& cv = root.at("convergence");
        read_opt(cv, "convergence", "spatial_cells", cfg.conv_spatial_cells);
        read_opt(cv, "convergence", "spatial_step_factor", cfg.conv_spatial_step_factor);
        read_opt(cv, "convergence", "T", cfg.conv_T);
        read_opt(cv, "convergence", "spatial_t0", cfg.conv_spatial_t0);
        read_opt(cv, "convergence", "temporal_steps", cfg.conv_temporal_steps);
        read_opt(cv, "convergence", "temporal_cells", cfg.conv_temporal_cells);
        read_opt(cv, "convergence", "temporal_t0", cfg.conv_temporal_t0);
        read_opt(cv, "convergence", "coupled_cells", cfg.conv_coupled_cells);
        read_opt(cv, "convergence", "coupled_step_factor", cfg.conv_coupled_step_factor);
    }

    if (root.contains("output")) {
        const json& out = root.at("output");
        read_opt(out, "output", "directory", cfg.out_dir);
        read_opt(out, "output", "precision", cfg.precision);
        if (cfg.precision < 6 || cfg.precision > 17) {
            throw ConfigError("key 'output.precision' must lie in [6, 17]");
        }
    }

    return cfg;
}

FsiProblem build_problem(const RunConfig& cfg) {
    FsiProblem pb;
    pb.grid = TimeGrid(cfg.T, cfg.n_steps);
    pb.n_cells_left = cfg.n_cells_left;
    pb.n_cells_right = cfg.n_cells_right;
    pb.q0 = cfg.q0;
    pb.q1 = cfg.q1;
    pb.delta = cfg.delta;
    pb.bound_m = cfg.bound_m;
    pb.compat_tol = cfg.compat_tol;
    pb.coupling_iterations = cfg.coupling_iterations;
    pb.coupling_tol = cfg.coupling_tol;
    pb.alpha = sample_signal(cfg.alpha, pb.grid);
    pb.eta = sample_signal(cfg.eta, pb.grid);
    std::function<double(double)> w0 = make_profile(cfg.w0);
    if (cfg.w0_interface_fix) {
        w0 = with_interface_fix(std::move(w0), cfg.q0, cfg.q1, cfg.w0_fix_radius);
    }
    pb.w0 = std::move(w0);
    return pb;
}

}  // namespace fsilab
