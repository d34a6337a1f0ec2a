#pragma once

#include <cstddef>

#include "fsilab/trajectory.hpp"

namespace fsilab {

enum class Side { left, right };

// Coefficients of the transformed equation on the fixed reference interval
// [0,1]:
//   z_t + (drift(y) + nonlinear_scale * z) z_y = diffusion * z_yy + f.
// Left side (y = (x+1)/(1+p)):  D = 1/(1+p)^2, scale = 1/(1+p),
//                               drift(y) = -y p'/(1+p).
// Right side (ybar = (x-p)/(1-p)): D = 1/(1-p)^2, scale = 1/(1-p),
//                               drift(ybar) = -(1-ybar) p'/(1-p).
// The drift is affine in the reference coordinate, so it is stored as
// offset + slope * y.
struct TransformedCoefficients {
    Side side = Side::left;
    double diffusion = 1.0;
    double nonlinear_scale = 1.0;
    double drift_offset = 0.0;
    double drift_slope = 0.0;

    double drift(double y) const { return drift_offset + drift_slope * y; }
};

// --- Coordinate maps -------------------------------------------------------

// y = (x+1)/(p+1), [-1, p] -> [0, 1]. Rejects x outside [-1, p] and |p| >= 1.
double map_left_to_reference(double x, double p_t);
double map_left_from_reference(double y, double p_t);

// ybar = (x-p)/(1-p), [p, 1] -> [0, 1].
double map_right_to_reference(double x, double p_t);
double map_right_from_reference(double y, double p_t);

// x* = 2 - 2y. Diagnostic reproduction of the second left-side reduction; the
// solver itself works directly in y coordinates.
double flip_reference(double y);

// that = T/(2 tbar) * t; returns the factor T/(2 tbar). Diagnostic utility.
double time_rescale_factor(double t_bar, double T);

// --- Coefficients ----------------------------------------------------------

// Coefficients from raw interface state. Throws std::domain_error when
// |p| > 1 - delta so degenerate geometry can never produce non-finite values.
TransformedCoefficients side_coefficients(Side side, double p, double p_dot, double delta);

// Coefficients of a validated trajectory at grid node j. Rejects trajectories
// that fail the admissibility bound.
TransformedCoefficients transformed_coefficients(const InterfaceTrajectory& traj, Side side,
                                                 int j);

}  // namespace fsilab
