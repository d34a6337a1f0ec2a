#include "fsilab/burgers.hpp"

#include <cmath>
#include <stdexcept>

#include "fsilab/tridiagonal.hpp"

namespace fsilab {

SideField::SideField(Side s, int cells, const TimeGrid& g) : side(s), n_cells(cells), grid(g) {
    if (cells < 3) { throw std::invalid_argument("SideField: need n_cells >= 3"); }
    values.assign(static_cast<std::size_t>(g.n_nodes()) * (cells + 1), 0.0);
}

std::span<double> SideField::level(int n) {
    return {values.data() + idx(n, 0), static_cast<std::size_t>(n_nodes())};
}

std::span<const double> SideField::level(int n) const {
    return {values.data() + idx(n, 0), static_cast<std::size_t>(n_nodes())};
}

namespace {

// Transport term a(y_j, z_j) * z_y at node j: central difference, first-order
// upwind once the cell Peclet number exceeds 2.
double transport_at(std::span<const double> z, int j, double h,
                    const TransformedCoefficients& coef, double y) {
    const double a = coef.drift(y) + coef.nonlinear_scale * z[j];
    const double peclet = std::abs(a) * h / coef.diffusion;
    double dz;
    if (peclet <= 2.0) {
        dz = (z[j + 1] - z[j - 1]) / (2.0 * h);
    } else if (a > 0.0) {
        dz = (z[j] - z[j - 1]) / h;
    } else {
        dz = (z[j + 1] - z[j]) / h;
    }
    return a * dz;
}

double forcing_value(std::span<const double> f, int j) {
    return f.empty() ? 0.0 : f[j];
}

}  // namespace

StepOutcome advance_step(SideField& field, int level, const StepInputs& inputs) {
    const int n = field.n_cells;
    const int m = field.n_nodes();
    const double h = field.h();
    const double dt = field.grid.dt();
    if (level < 0 || level + 1 > field.grid.n_steps) {
        throw std::out_of_range("advance_step: level out of range");
    }
    if (!inputs.forcing_old.empty() && static_cast<int>(inputs.forcing_old.size()) != m) {
        throw std::invalid_argument("advance_step: forcing_old size mismatch");
    }
    if (!inputs.forcing_new.empty() && static_cast<int>(inputs.forcing_new.size()) != m) {
        throw std::invalid_argument("advance_step: forcing_new size mismatch");
    }

    const std::span<const double> zn = field.level(level);
    const double r_old = inputs.coef_old.diffusion * dt / (h * h);
    const double r_new = inputs.coef_new.diffusion * dt / (h * h);

    TridiagonalSystem sys(m);
    sys.diag(0) = 1.0;
    sys.upper(0) = 0.0;
    for (int j = 1; j < n; ++j) {
        sys.lower(j) = -0.5 * r_new;
        sys.diag(j) = 1.0 + r_new;
        sys.upper(j) = -0.5 * r_new;
    }
    sys.lower(n) = 0.0;
    sys.diag(n) = 1.0;
    if (!sys.factor()) { return {StepStatus::singular, level + 1}; }

    // Shared explicit part: old-level diffusion and the forcing average.
    std::vector<double> base(m, 0.0);
    for (int j = 1; j < n; ++j) {
        const double d2 = zn[j - 1] - 2.0 * zn[j] + zn[j + 1];
        const double f_mid =
            0.5 * (forcing_value(inputs.forcing_old, j) + forcing_value(inputs.forcing_new, j));
        base[j] = zn[j] + 0.5 * r_old * d2 + dt * f_mid;
    }

    std::vector<double> work(m, 0.0);
    // Predictor: transport from the old state and old coefficients.
    work[0] = inputs.bc_lower;
    work[n] = inputs.bc_upper;
    for (int j = 1; j < n; ++j) {
        work[j] = base[j] - dt * transport_at(zn, j, h, inputs.coef_old, field.y(j));
    }
    sys.solve(work);
    const std::vector<double> predicted = work;

    // Corrector: trapezoidal transport using the predicted state at t_{n+1}.
    work[0] = inputs.bc_lower;
    work[n] = inputs.bc_upper;
    for (int j = 1; j < n; ++j) {
        const double t_old = transport_at(zn, j, h, inputs.coef_old, field.y(j));
        const double t_new = transport_at(predicted, j, h, inputs.coef_new, field.y(j));
        work[j] = base[j] - 0.5 * dt * (t_old + t_new);
    }
    sys.solve(work);

    std::span<double> out = field.level(level + 1);
    for (int j = 0; j < m; ++j) {
        if (!std::isfinite(work[j])) { return {StepStatus::nonfinite, level + 1}; }
        out[j] = work[j];
    }
    return {StepStatus::ok, level + 1};
}

double boundary_flux(std::span<const double> z, double h, FieldEnd end) {
    const std::size_t m = z.size();
    if (m < 4) { throw std::invalid_argument("boundary_flux: need at least 4 nodes"); }
    if (end == FieldEnd::lower) {
        return (-3.0 * z[0] + 4.0 * z[1] - z[2]) / (2.0 * h);
    }
    return (3.0 * z[m - 1] - 4.0 * z[m - 2] + z[m - 3]) / (2.0 * h);
}

double boundary_flux(const SideField& field, FieldEnd end, int level) {
    return boundary_flux(field.level(level), field.h(), end);
}

double residual_norm(const SideField& field, int level_begin, int level_end,
                     const std::function<TransformedCoefficients(int)>& coefficients_at,
                     const std::function<double(int, int)>& forcing_at) {
    if (level_end <= level_begin) {
        throw std::invalid_argument("residual_norm: window must span at least 2 levels");
    }
    const int n = field.n_cells;
    const double h = field.h();
    const double dt = field.grid.dt();
    double acc = 0.0;
    for (int lev = level_begin; lev < level_end; ++lev) {
        const std::span<const double> za = field.level(lev);
        const std::span<const double> zb = field.level(lev + 1);
        const TransformedCoefficients ca = coefficients_at(lev);
        const TransformedCoefficients cb = coefficients_at(lev + 1);
        for (int j = 1; j < n; ++j) {
            const double y = field.y(j);
            const double ddt = (zb[j] - za[j]) / dt;
            const double adv_a =
                (ca.drift(y) + ca.nonlinear_scale * za[j]) * (za[j + 1] - za[j - 1]) / (2.0 * h);
            const double adv_b =
                (cb.drift(y) + cb.nonlinear_scale * zb[j]) * (zb[j + 1] - zb[j - 1]) / (2.0 * h);
            const double diff_a = ca.diffusion * (za[j - 1] - 2.0 * za[j] + za[j + 1]) / (h * h);
            const double diff_b = cb.diffusion * (zb[j - 1] - 2.0 * zb[j] + zb[j + 1]) / (h * h);
            double f_mid = 0.0;
            if (forcing_at) { f_mid = 0.5 * (forcing_at(lev, j) + forcing_at(lev + 1, j)); }
            const double defect = ddt + 0.5 * (adv_a + adv_b) - 0.5 * (diff_a + diff_b) - f_mid;
            acc += h * dt * defect * defect;
        }
    }
    return std::sqrt(acc);
}

}  // namespace fsilab
