#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsilab/fsi.hpp"
#include "fsilab/presets.hpp"

namespace fsilab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed run configuration. Only problem.T is mandatory; everything else has
// the defaults below.
struct RunConfig {
    // problem
    double T = 1.0;
    double q0 = 0.0;
    double q1 = 0.0;
    double delta = 0.1;
    double bound_m = 10.0;
    SignalPreset w0;
    bool w0_interface_fix = true;
    double w0_fix_radius = 0.2;
    SignalPreset alpha;
    SignalPreset eta;
    double compat_tol = 1e-8;
    int coupling_iterations = 2;
    double coupling_tol = 1e-10;

    // discretization
    int n_cells_left = 128;
    int n_cells_right = 128;
    int n_steps = 1024;

    // inverse
    std::string unknowns = "eta_only";
    int p_knots = 10;
    int eta_knots = 8;
    double lambda_p = 1e-6;
    double lambda_eta = 1e-6;
    double mu_jump = 1.0;
    int max_iter = 200;
    double grad_tol = 1e-9;
    double step_tol = 1e-10;
    bool twin = true;
    std::string data_csv;
    bool has_truth_p = false;
    SignalPreset truth_p;  // prescribed trajectory truth for p twins

    // sweep
    std::vector<double> sweep_eps = {1e-1, 1e-2, 1e-3, 1e-4};
    std::vector<std::uint64_t> sweep_seeds = {1, 2, 3};
    std::string noise_kind = "gaussian";
    double eps_t_fraction = 0.1;

    // oracle
    double oracle_ell = 1.0;
    int oracle_n = 1;
    int oracle_k = 2;
    double oracle_offset = 2.0;
    double oracle_t_max = 1.0;
    int oracle_samples = 256;

    // convergence
    std::vector<int> conv_spatial_cells = {32, 64, 128, 256};
    int conv_spatial_step_factor = 16;
    double conv_T = 0.5;
    double conv_spatial_t0 = 0.0;
    std::vector<int> conv_temporal_steps = {16, 32, 64, 128};
    int conv_temporal_cells = 512;
    double conv_temporal_t0 = 0.4;
    std::vector<int> conv_coupled_cells = {64, 128, 256};
    int conv_coupled_step_factor = 8;  // n_steps = factor * n_cells

    // output
    std::string out_dir = "out";
    int precision = 17;
};

// Throws ConfigError naming the offending key or the parse location.
RunConfig load_config(const std::string& path);

// Builds the coupled problem from the presets (with the interface fix applied
// to w0 when configured).
FsiProblem build_problem(const RunConfig& config);

}  // namespace fsilab
