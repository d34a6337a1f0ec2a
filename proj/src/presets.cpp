#include "fsilab/presets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsilab/cole_hopf.hpp"

namespace fsilab {

namespace {

double param_or(const SignalPreset& p, const std::string& key, double fallback) {
    const auto it = p.params.find(key);
    return it == p.params.end() ? fallback : it->second;
}

bool has_param(const SignalPreset& p, const std::string& key) {
    return p.params.find(key) != p.params.end();
}

ColeHopfSolution cole_hopf_from(const SignalPreset& p) {
    const double length = param_or(p, "length", 1.0);
    const int mode = static_cast<int>(param_or(p, "mode", 1.0));
    const double offset = param_or(p, "offset", 2.0);
    return ColeHopfSolution::make(length, mode, offset);
}

SignalEval poly_eval(const std::vector<double>& c, double t) {
    SignalEval out;
    // Horner for the value and both derivatives.
    for (std::size_t i = c.size(); i-- > 0;) {
        out.d2 = out.d2 * t + 2.0 * out.d1;
        out.d1 = out.d1 * t + out.value;
        out.value = out.value * t + c[i];
    }
    // d2 accumulated 2*d1 per level already gives the second derivative.
    return out;
}

}  // namespace

bool preset_name_known(const std::string& name) {
    return name == "zero" || name == "const" || name == "sine" || name == "decay" ||
           name == "colehopf" || name == "poly";
}

std::function<SignalEval(double)> make_signal(const SignalPreset& preset, double T) {
    if (preset.name == "zero") {
        return [](double) { return SignalEval{}; };
    }
    if (preset.name == "const") {
        const double v = param_or(preset, "value", 0.0);
        return [v](double) { return SignalEval{v, 0.0, 0.0}; };
    }
    if (preset.name == "sine") {
        const double offset = param_or(preset, "offset", 0.0);
        const double amplitude = param_or(preset, "amplitude", 1.0);
        const double phase = param_or(preset, "phase", 0.0);
        double omega = param_or(preset, "omega", std::numbers::pi / T);
        if (has_param(preset, "half_periods")) {
            omega = param_or(preset, "half_periods", 1.0) * std::numbers::pi / T;
        }
        return [=](double t) {
            const double s = std::sin(omega * t + phase);
            const double c = std::cos(omega * t + phase);
            return SignalEval{offset + amplitude * s, amplitude * omega * c,
                              -amplitude * omega * omega * s};
        };
    }
    if (preset.name == "decay") {
        const double offset = param_or(preset, "offset", 0.0);
        const double amplitude = param_or(preset, "amplitude", 1.0);
        const double rate = param_or(preset, "rate", 1.0);
        return [=](double t) {
            const double e = amplitude * std::exp(-rate * t);
            return SignalEval{offset + e, -rate * e, rate * rate * e};
        };
    }
    if (preset.name == "poly") {
        const std::vector<double> c = preset.coeffs;
        return [c](double t) { return poly_eval(c, t); };
    }
    if (preset.name == "colehopf") {
        const ColeHopfSolution sol = cole_hopf_from(preset);
        const double x0 = param_or(preset, "x0", 0.0);
        const double t0 = param_or(preset, "t0", 0.0);
        return [sol, x0, t0](double t) {
            const ColeHopfSolution::Eval e = sol.evaluate(x0, t0 + t);
            return SignalEval{e.u, e.u_t, 0.0};
        };
    }
    throw std::invalid_argument("unknown signal preset: " + preset.name);
}

std::function<double(double)> make_time_signal(const SignalPreset& preset, double T) {
    auto f = make_signal(preset, T);
    return [f](double t) { return f(t).value; };
}

std::vector<double> sample_signal(const SignalPreset& preset, const TimeGrid& grid) {
    const auto f = make_signal(preset, grid.T);
    std::vector<double> out(grid.n_nodes());
    for (int j = 0; j < grid.n_nodes(); ++j) { out[j] = f(grid.t(j)).value; }
    return out;
}

std::function<double(double)> make_profile(const SignalPreset& preset) {
    if (preset.name == "zero") {
        return [](double) { return 0.0; };
    }
    if (preset.name == "const") {
        const double v = param_or(preset, "value", 0.0);
        return [v](double) { return v; };
    }
    if (preset.name == "sine") {
        const double offset = param_or(preset, "offset", 0.0);
        const double amplitude = param_or(preset, "amplitude", 1.0);
        const double phase = param_or(preset, "phase", 0.0);
        const double omega = param_or(preset, "omega", std::numbers::pi);
        return [=](double x) { return offset + amplitude * std::sin(omega * x + phase); };
    }
    if (preset.name == "decay") {
        const double offset = param_or(preset, "offset", 0.0);
        const double amplitude = param_or(preset, "amplitude", 1.0);
        const double rate = param_or(preset, "rate", 1.0);
        return [=](double x) { return offset + amplitude * std::exp(-rate * x); };
    }
    if (preset.name == "poly") {
        const std::vector<double> c = preset.coeffs;
        return [c](double x) { return poly_eval(c, x).value; };
    }
    if (preset.name == "colehopf") {
        const ColeHopfSolution sol = cole_hopf_from(preset);
        const double shift = param_or(preset, "shift", 0.0);
        const double t0 = param_or(preset, "t0", 0.0);
        return [sol, shift, t0](double x) { return sol.value(x + shift, t0); };
    }
    throw std::invalid_argument("unknown profile preset: " + preset.name);
}

InterfaceTrajectory trajectory_from_preset(const SignalPreset& preset, const TimeGrid& grid,
                                           double delta, double bound_m) {
    if (preset.name == "colehopf") {
        throw std::invalid_argument(
            "trajectory_from_preset: colehopf has no exact second time derivative here");
    }
    const auto f = make_signal(preset, grid.T);
    return sample_trajectory(
        grid, [f](double t) { return f(t).value; }, [f](double t) { return f(t).d1; },
        [f](double t) { return f(t).d2; }, delta, bound_m);
}

std::function<double(double)> with_interface_fix(std::function<double(double)> base, double q0,
                                                 double q1, double radius) {
    if (!(radius > 0.0)) { throw std::invalid_argument("interface fix radius must be > 0"); }
    const double gap = q1 - base(q0);
    return [base = std::move(base), q0, gap, radius](double x) {
        const double s = (x - q0) / radius;
        double bump = 0.0;
        if (std::abs(s) < 1.0) {
            const double c = std::cos(0.5 * std::numbers::pi * s);
            bump = c * c;
        }
        return base(x) + gap * bump;
    };
}

std::function<double(double)> sampled_profile(std::vector<double> xs,
                                              std::vector<double> values) {
    if (xs.size() != values.size() || xs.size() < 2) {
        throw std::invalid_argument("sampled_profile: need matching samples, at least two");
    }
    if (!std::is_sorted(xs.begin(), xs.end())) {
        throw std::invalid_argument("sampled_profile: abscissae must be sorted");
    }
    return [xs = std::move(xs), values = std::move(values)](double x) {
        if (x <= xs.front()) { return values.front(); }
        if (x >= xs.back()) { return values.back(); }
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
        return values[i - 1] + w * (values[i] - values[i - 1]);
    };
}

}  // namespace fsilab
