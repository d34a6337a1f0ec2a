#pragma once

#include <functional>
#include <span>
#include <vector>

#include "fsilab/geometry.hpp"
#include "fsilab/time_grid.hpp"

namespace fsilab {

// Space-time field of one transformed side-domain: nodes y_j = j/n_cells on
// [0,1], one row of values per stored time level. Boundary nodes always hold
// the imposed Dirichlet data for their level.
struct SideField {
    Side side = Side::left;
    int n_cells = 0;
    TimeGrid grid;
    std::vector<double> values;  // (n_steps+1) rows * (n_cells+1) columns

    SideField() = default;
    SideField(Side s, int cells, const TimeGrid& g);

    int n_nodes() const { return n_cells + 1; }
    double h() const { return 1.0 / n_cells; }
    double y(int node) const { return static_cast<double>(node) / n_cells; }

    double& at(int level, int node) { return values[idx(level, node)]; }
    double at(int level, int node) const { return values[idx(level, node)]; }
    std::span<double> level(int n);
    std::span<const double> level(int n) const;

  private:
    std::size_t idx(int level, int node) const {
        return static_cast<std::size_t>(level) * n_nodes() + node;
    }
};

enum class StepStatus { ok, nonfinite, singular };

struct StepOutcome {
    StepStatus status = StepStatus::ok;
    int time_index = -1;  // target level of the failed step
    bool ok() const { return status == StepStatus::ok; }
};

// One time step of data. Forcing spans are per-node samples at the two time
// levels; empty spans mean zero forcing.
struct StepInputs {
    TransformedCoefficients coef_old;
    TransformedCoefficients coef_new;
    double bc_lower = 0.0;  // Dirichlet value at y=0, time t_{n+1}
    double bc_upper = 0.0;  // Dirichlet value at y=1, time t_{n+1}
    std::span<const double> forcing_old{};
    std::span<const double> forcing_new{};
};

// Semi-implicit step from stored level `level` to `level+1`: Crank-Nicolson
// diffusion, transport (drift + scale*z) z_y on the right-hand side with a
// predictor/corrector evaluation of the advective state, central differences
// with a first-order upwind fallback wherever the cell Peclet number |a| h / D
// exceeds 2. One tridiagonal factorization per step, two back-substitutions.
StepOutcome advance_step(SideField& field, int level, const StepInputs& inputs);

enum class FieldEnd { lower, upper };

// Second-order one-sided three-point derivative at an end node.
double boundary_flux(const SideField& field, FieldEnd end, int level);
double boundary_flux(std::span<const double> z, double h, FieldEnd end);

// Discrete space-time L2 norm of the defect obtained by inserting the stored
// solution into a centered (midpoint-in-time) discretization of the
// transformed equation over levels [level_begin, level_end].
double residual_norm(const SideField& field, int level_begin, int level_end,
                     const std::function<TransformedCoefficients(int)>& coefficients_at,
                     const std::function<double(int, int)>& forcing_at = {});

}  // namespace fsilab
