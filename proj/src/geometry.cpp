#include "fsilab/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fsilab {

namespace {
constexpr double kRangeTol = 1e-12;

void check_interface(double p_t) {
    if (!(std::abs(p_t) < 1.0)) {
        throw std::domain_error("interface position |p| must be < 1, got p=" +
                                std::to_string(p_t));
    }
}
}  // namespace

double map_left_to_reference(double x, double p_t) {
    check_interface(p_t);
    if (x < -1.0 - kRangeTol || x > p_t + kRangeTol) {
        throw std::domain_error("map_left_to_reference: x outside [-1, p]");
    }
    return (x + 1.0) / (p_t + 1.0);
}

double map_left_from_reference(double y, double p_t) {
    check_interface(p_t);
    if (y < -kRangeTol || y > 1.0 + kRangeTol) {
        throw std::domain_error("map_left_from_reference: y outside [0, 1]");
    }
    return -1.0 + y * (p_t + 1.0);
}

double map_right_to_reference(double x, double p_t) {
    check_interface(p_t);
    if (x < p_t - kRangeTol || x > 1.0 + kRangeTol) {
        throw std::domain_error("map_right_to_reference: x outside [p, 1]");
    }
    return (x - p_t) / (1.0 - p_t);
}

double map_right_from_reference(double y, double p_t) {
    check_interface(p_t);
    if (y < -kRangeTol || y > 1.0 + kRangeTol) {
        throw std::domain_error("map_right_from_reference: y outside [0, 1]");
    }
    return p_t + y * (1.0 - p_t);
}

double flip_reference(double y) {
    if (y < -kRangeTol || y > 1.0 + kRangeTol) {
        throw std::domain_error("flip_reference: y outside [0, 1]");
    }
    return 2.0 - 2.0 * y;
}

double time_rescale_factor(double t_bar, double T) {
    if (!(t_bar > 0.0) || !(t_bar <= T)) {
        throw std::domain_error("time_rescale_factor: need 0 < t_bar <= T");
    }
    return T / (2.0 * t_bar);
}

TransformedCoefficients side_coefficients(Side side, double p, double p_dot, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::domain_error("side_coefficients: delta must lie in (0,1)");
    }
    if (!(std::abs(p) <= 1.0 - delta + kRangeTol)) {
        throw std::domain_error("side_coefficients: |p| exceeds 1 - delta (p=" +
                                std::to_string(p) + ", delta=" + std::to_string(delta) + ")");
    }
    TransformedCoefficients c;
    c.side = side;
    if (side == Side::left) {
        const double w = p + 1.0;
        c.diffusion = 1.0 / (w * w);
        c.nonlinear_scale = 1.0 / w;
        c.drift_offset = 0.0;
        c.drift_slope = -p_dot / w;
    } else {
        const double w = 1.0 - p;
        c.diffusion = 1.0 / (w * w);
        c.nonlinear_scale = 1.0 / w;
        c.drift_offset = -p_dot / w;
        c.drift_slope = p_dot / w;
    }
    return c;
}

TransformedCoefficients transformed_coefficients(const InterfaceTrajectory& traj, Side side,
                                                 int j) {
    if (j < 0 || j >= traj.n_nodes()) {
        throw std::out_of_range("transformed_coefficients: node index out of range");
    }
    const TrajectoryValidation report = validate_trajectory(traj);
    if (!report.bound_ok) {
        throw std::domain_error("transformed_coefficients: trajectory violates |p| <= 1 - delta");
    }
    return side_coefficients(side, traj.p[static_cast<std::size_t>(j)],
                             traj.p_dot[static_cast<std::size_t>(j)], traj.delta);
}

}  // namespace fsilab
