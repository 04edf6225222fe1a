#pragma once

#include "loggas/gibbs.hpp"

namespace loggas {

// Probability measure on a uniform grid, piecewise constant per cell.
struct DiscreteMeasure {
  std::vector<double> nodes;    // cell centers
  std::vector<double> weights;  // nonnegative, sum to 1
  double cell = 0.0;            // grid spacing

  double density_at(double x) const;   // weight / cell of the containing cell
  double cdf(double x) const;          // piecewise linear
  double support_radius() const;       // max |x| over cells with weight > 0
  double total_mass() const;
};

struct EquilibriumOptions {
  double x_min = -3.0;
  double x_max = 3.0;
  int grid_n = 601;
  int max_active_set_iterations = 200;
};

// Minimizer of the continuum energy  int int -log|x-y| dmu dmu + int V dmu
// over probability measures on the grid, via the exact cell-averaged log
// kernel and an active-set solve of the KKT system. Independent oracle for
// Fekete configurations and local densities. Throws SolverFailure if the
// active set does not settle within budget.
DiscreteMeasure equilibrium_oracle(const Potential& v,
                                   const EquilibriumOptions& options = {});

// Euler-Lagrange residual: sup over support-cell midpoints of
// |(-2 int log|x-y| dmu(y) + V(x)) - constant|, the constant chosen as the
// weighted mean of the left-hand side over the support.
double euler_lagrange_residual(const DiscreteMeasure& mu, const Potential& v);

}  // namespace loggas
