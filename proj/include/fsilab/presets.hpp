#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fsilab/time_grid.hpp"
#include "fsilab/trajectory.hpp"

namespace fsilab {

// Named closed-form signal families used by the configuration layer for
// boundary data, initial profiles and prescribed trajectories.
struct SignalPreset {
    std::string name = "zero";  // zero | const | sine | decay | colehopf | poly
    std::map<std::string, double> params;
    std::vector<double> coeffs;  // poly coefficients, lowest order first
};

struct SignalEval {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

bool preset_name_known(const std::string& name);

// Signal of time on [0, T]. sine supports either a literal "omega" or
// "half_periods" (omega = half_periods * pi / T).
std::function<SignalEval(double)> make_signal(const SignalPreset& preset, double T);
std::function<double(double)> make_time_signal(const SignalPreset& preset, double T);
std::vector<double> sample_signal(const SignalPreset& preset, const TimeGrid& grid);

// Spatial profile on [-1, 1]; poly coefficients are powers of x, colehopf is
// evaluated at (x + shift, t0).
std::function<double(double)> make_profile(const SignalPreset& preset);

// Trajectory presets must carry exact derivatives; colehopf is rejected here.
InterfaceTrajectory trajectory_from_preset(const SignalPreset& preset, const TimeGrid& grid,
                                           double delta, double bound_m);

// Adds a C^1 bump of the given radius at q0 so the profile takes the value q1
// there, guarding the kinematic compatibility of hand-authored data.
std::function<double(double)> with_interface_fix(std::function<double(double)> base, double q0,
                                                 double q1, double radius);

// Piecewise-linear interpolant of a sampled profile.
std::function<double(double)> sampled_profile(std::vector<double> xs, std::vector<double> values);

}  // namespace fsilab
