#include "fsilab/cole_hopf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fsilab {

ColeHopfSolution ColeHopfSolution::make(double domain_length, int mode, double offset) {
    if (!(domain_length > 0.0)) {
        throw std::invalid_argument("ColeHopfSolution: domain_length must be positive");
    }
    if (mode < 1) { throw std::invalid_argument("ColeHopfSolution: mode must be >= 1"); }
    if (!(offset > 1.0)) {
        throw std::invalid_argument("ColeHopfSolution: offset A must exceed 1 so phi > 0");
    }
    ColeHopfSolution s;
    s.domain_length = domain_length;
    s.mode = mode;
    s.offset = offset;
    s.a = mode * std::numbers::pi / domain_length;
    return s;
}

double ColeHopfSolution::phi(double x, double t) const {
    return std::exp(-a * a * t) * std::sin(a * x) + offset;
}

double ColeHopfSolution::phi_x(double x, double t) const {
    return a * std::exp(-a * a * t) * std::cos(a * x);
}

double ColeHopfSolution::phi_xx(double x, double t) const {
    return -a * a * std::exp(-a * a * t) * std::sin(a * x);
}

ColeHopfSolution::Eval ColeHopfSolution::evaluate(double x, double t) const {
    const double e = std::exp(-a * a * t);
    const double s = std::sin(a * x);
    const double c = std::cos(a * x);
    const double f = e * s + offset;      // phi
    const double fx = a * e * c;          // phi_x
    const double fxx = -a * a * e * s;    // phi_xx
    const double fxxx = -a * a * fx;      // phi_xxx
    const double ft = fxx;                // heat equation phi_t = phi_xx
    const double fxt = -a * a * fx;       // phi_xt

    Eval out;
    out.u = -fx / f;
    out.u_x = -(fxx * f - fx * fx) / (f * f);
    out.u_t = -(fxt * f - fx * ft) / (f * f);
    // u_xx from the quotient rule applied twice.
    out.u_xx = -(fxxx * f * f - 3.0 * f * fx * fxx + 2.0 * fx * fx * fx) / (f * f * f);
    return out;
}

std::pair<ColeHopfSolution, ColeHopfSolution> counterexample_pair(double ell, int n, int k,
                                                                  double offset) {
    if (!(ell > 0.0)) { throw std::invalid_argument("counterexample_pair: ell must be > 0"); }
    if (n < 1 || k < 1) {
        throw std::invalid_argument("counterexample_pair: mode integers must be >= 1");
    }
    if (n == k) {
        throw std::invalid_argument("counterexample_pair: modes must differ (n != k)");
    }
    if (k < n) {
        throw std::invalid_argument(
            "counterexample_pair: need k > n so the second interval is longer");
    }
    const double L = k * ell / static_cast<double>(n);
    ColeHopfSolution u1 = ColeHopfSolution::make(ell, n, offset);
    ColeHopfSolution u2 = ColeHopfSolution::make(L, k, offset);
    return {u1, u2};
}

ManufacturedCase manufactured_forcing(std::function<double(double, double)> u,
                                      std::function<double(double, double)> u_x,
                                      std::function<double(double, double)> u_t,
                                      std::function<double(double, double)> u_xx) {
    ManufacturedCase c;
    c.u = std::move(u);
    c.u_x = std::move(u_x);
    c.u_t = std::move(u_t);
    c.u_xx = std::move(u_xx);
    c.forcing = [value = c.u, dx = c.u_x, dt = c.u_t, dxx = c.u_xx](double x, double t) {
        return dt(x, t) - dxx(x, t) + value(x, t) * dx(x, t);
    };
    return c;
}

ManufacturedCase manufactured_from(const ColeHopfSolution& sol) {
    return manufactured_forcing(
        [sol](double x, double t) { return sol.evaluate(x, t).u; },
        [sol](double x, double t) { return sol.evaluate(x, t).u_x; },
        [sol](double x, double t) { return sol.evaluate(x, t).u_t; },
        [sol](double x, double t) { return sol.evaluate(x, t).u_xx; });
}

}  // namespace fsilab
