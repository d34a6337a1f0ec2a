#pragma once

#include <functional>
#include <utility>

namespace fsilab {

// Closed-form Burgers solutions u = -phi_x/phi built from the heat solution
//   phi(x,t) = exp(-a^2 t) sin(a x) + A,   a = n pi / domain_length,  A > 1.
// The offset bound keeps phi positive everywhere, so the solutions are global.
struct ColeHopfSolution {
    double a = 0.0;              // wavenumber n*pi/domain_length
    double offset = 2.0;         // A
    double domain_length = 1.0;  // ell
    int mode = 1;                // n

    struct Eval {
        double u = 0.0;
        double u_x = 0.0;
        double u_t = 0.0;
        double u_xx = 0.0;
    };

    // a is constructed as mode*pi/domain_length exactly; requires offset > 1.
    static ColeHopfSolution make(double domain_length, int mode, double offset);

    double phi(double x, double t) const;
    double phi_x(double x, double t) const;
    double phi_xx(double x, double t) const;

    Eval evaluate(double x, double t) const;
    double value(double x, double t) const { return evaluate(x, t).u; }
};

// The two solutions sharing one wavenumber on nested intervals (0, ell) and
// (0, L) with L = k*ell/n, k > n. Their Cauchy pairs at x = 0 coincide
// identically while the right-endpoint traces differ, which is the
// non-uniqueness demonstration without an anchor point.
std::pair<ColeHopfSolution, ColeHopfSolution> counterexample_pair(double ell, int n, int k,
                                                                  double offset);

// Closed-form profile with analytic derivatives and the Burgers forcing
// f = u_t - u_xx + u u_x it generates. Exact solutions produce f == 0.
struct ManufacturedCase {
    std::function<double(double, double)> u;
    std::function<double(double, double)> u_x;
    std::function<double(double, double)> u_t;
    std::function<double(double, double)> u_xx;
    std::function<double(double, double)> forcing;
};

ManufacturedCase manufactured_forcing(std::function<double(double, double)> u,
                                      std::function<double(double, double)> u_x,
                                      std::function<double(double, double)> u_t,
                                      std::function<double(double, double)> u_xx);

ManufacturedCase manufactured_from(const ColeHopfSolution& sol);

}  // namespace fsilab
