#include "fsilab/bspline.hpp"

#include <algorithm>
#include <stdexcept>

namespace fsilab {

namespace {
constexpr int kDegree = 3;
}

CubicBSplineBasis::CubicBSplineBasis(double t_end, int n_basis)
    : t_end_(t_end), n_basis_(n_basis) {
    if (!(t_end > 0.0)) { throw std::invalid_argument("CubicBSplineBasis: t_end must be > 0"); }
    if (n_basis < 4) {
        throw std::invalid_argument("CubicBSplineBasis: need at least 4 basis functions");
    }
    // Clamped knot vector: degree+1 copies at each end, uniform interior.
    knots_.assign(n_basis + kDegree + 1, 0.0);
    const int segments = n_basis - kDegree;  // number of polynomial pieces
    for (int i = 0; i <= kDegree; ++i) { knots_[i] = 0.0; }
    for (int i = 1; i < segments; ++i) {
        knots_[kDegree + i] = t_end * static_cast<double>(i) / segments;
    }
    for (int i = n_basis; i < static_cast<int>(knots_.size()); ++i) { knots_[i] = t_end; }
}

int CubicBSplineBasis::find_span(double t) const {
    if (t >= knots_[n_basis_]) { return n_basis_ - 1; }
    if (t <= 0.0) { return kDegree; }
    int lo = kDegree;
    int hi = n_basis_;
    while (hi - lo > 1) {
        const int mid = (lo + hi) / 2;
        if (t < knots_[mid]) { hi = mid; } else { lo = mid; }
    }
    return lo;
}

CubicBSplineBasis::Local CubicBSplineBasis::eval(double t) const {
    const int p = kDegree;
    const int span = find_span(t);

    // Triangular table of basis values and knot differences (standard
    // derivatives-of-basis-functions recursion).
    double ndu[kDegree + 1][kDegree + 1];
    double left[kDegree + 1];
    double right[kDegree + 1];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = t - knots_[span + 1 - j];
        right[j] = knots_[span + j] - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    Local out;
    out.first = span - p;
    for (int j = 0; j <= p; ++j) { out.value[j] = ndu[j][p]; }

    constexpr int nd = 2;  // derivative orders
    double ders[nd + 1][kDegree + 1];
    for (int j = 0; j <= p; ++j) { ders[0][j] = ndu[j][p]; }
    double a[2][kDegree + 1];
    for (int r = 0; r <= p; ++r) {
        int s1 = 0;
        int s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j) { ders[k][j] *= factor; }
        factor *= (p - k);
    }
    for (int j = 0; j <= p; ++j) {
        out.d1[j] = ders[1][j];
        out.d2[j] = ders[2][j];
    }
    return out;
}

double CubicBSplineBasis::value(const Eigen::VectorXd& coeffs, double t) const {
    const Local l = eval(t);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) { acc += coeffs[l.first + j] * l.value[j]; }
    return acc;
}

double CubicBSplineBasis::derivative(const Eigen::VectorXd& coeffs, double t) const {
    const Local l = eval(t);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) { acc += coeffs[l.first + j] * l.d1[j]; }
    return acc;
}

double CubicBSplineBasis::second_derivative(const Eigen::VectorXd& coeffs, double t) const {
    const Local l = eval(t);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) { acc += coeffs[l.first + j] * l.d2[j]; }
    return acc;
}

Eigen::MatrixXd CubicBSplineBasis::value_matrix(const TimeGrid& grid) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(grid.n_nodes(), n_basis_);
    for (int i = 0; i < grid.n_nodes(); ++i) {
        const Local l = eval(grid.t(i));
        for (int j = 0; j < 4; ++j) { m(i, l.first + j) = l.value[j]; }
    }
    return m;
}

Eigen::MatrixXd CubicBSplineBasis::derivative_matrix(const TimeGrid& grid) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(grid.n_nodes(), n_basis_);
    for (int i = 0; i < grid.n_nodes(); ++i) {
        const Local l = eval(grid.t(i));
        for (int j = 0; j < 4; ++j) { m(i, l.first + j) = l.d1[j]; }
    }
    return m;
}

Eigen::MatrixXd CubicBSplineBasis::second_derivative_matrix(const TimeGrid& grid) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(grid.n_nodes(), n_basis_);
    for (int i = 0; i < grid.n_nodes(); ++i) {
        const Local l = eval(grid.t(i));
        for (int j = 0; j < 4; ++j) { m(i, l.first + j) = l.d2[j]; }
    }
    return m;
}

Eigen::VectorXd CubicBSplineBasis::fit(const TimeGrid& grid,
                                       const std::vector<double>& values) const {
    if (static_cast<int>(values.size()) != grid.n_nodes()) {
        throw std::invalid_argument("CubicBSplineBasis::fit: sample count mismatch");
    }
    const Eigen::MatrixXd m = value_matrix(grid);
    Eigen::VectorXd rhs(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) { rhs[i] = values[i]; }
    return m.colPivHouseholderQr().solve(rhs);
}

}  // namespace fsilab
