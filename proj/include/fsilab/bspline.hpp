#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "fsilab/time_grid.hpp"

namespace fsilab {

// Clamped cubic B-spline basis on [0, t_end] with uniformly spaced interior
// knots. Coefficients bound the curve through the convex-hull property, which
// is what makes box projection of spline coefficients enforce |p| <= 1-delta
// pointwise.
class CubicBSplineBasis {
  public:
    CubicBSplineBasis(double t_end, int n_basis);

    int size() const { return n_basis_; }
    double t_end() const { return t_end_; }
    double knot(int i) const { return knots_[i]; }

    struct Local {
        int first = 0;  // index of the first of the four nonzero basis functions
        std::array<double, 4> value{};
        std::array<double, 4> d1{};
        std::array<double, 4> d2{};
    };
    Local eval(double t) const;

    double value(const Eigen::VectorXd& coeffs, double t) const;
    double derivative(const Eigen::VectorXd& coeffs, double t) const;
    double second_derivative(const Eigen::VectorXd& coeffs, double t) const;

    // Dense collocation matrices on the grid nodes, n_nodes x n_basis.
    Eigen::MatrixXd value_matrix(const TimeGrid& grid) const;
    Eigen::MatrixXd derivative_matrix(const TimeGrid& grid) const;
    Eigen::MatrixXd second_derivative_matrix(const TimeGrid& grid) const;

    // Least-squares fit of sampled values at the grid nodes.
    Eigen::VectorXd fit(const TimeGrid& grid, const std::vector<double>& values) const;

  private:
    int find_span(double t) const;

    double t_end_ = 1.0;
    int n_basis_ = 4;
    std::vector<double> knots_;
};

}  // namespace fsilab
