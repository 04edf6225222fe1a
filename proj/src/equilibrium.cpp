#include "loggas/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "loggas/numerics.hpp"

namespace loggas {

namespace {

// Antiderivatives of log|s|:  g(t) = t log|t| - t,  G(t) = t^2/2 log|t| - 3t^2/4.
// (g(0) = G(0) = 0 by continuity.)
double g_log(double t) {
  if (t == 0.0) return 0.0;
  return t * std::log(std::abs(t)) - t;
}

double big_g(double t) {
  if (t == 0.0) return 0.0;
  return 0.5 * t * t * std::log(std::abs(t)) - 0.75 * t * t;
}

// Cell-cell averaged kernel of -log|x - y| for two cells of width h whose
// centers are distance d apart. Exact for piecewise-constant densities and
// finite on the diagonal (-log h + 3/2).
double cell_kernel(double d, double h) {
  return -(big_g(d + h) - 2.0 * big_g(d) + big_g(d - h)) / (h * h);
}

// Average of -log|x - y| over a single cell [c - h/2, c + h/2] at fixed x.
double point_cell_kernel(double x, double c, double h) {
  return -(g_log(x - c + 0.5 * h) - g_log(x - c - 0.5 * h)) / h;
}

}  // namespace

double DiscreteMeasure::density_at(double x) const {
  if (nodes.empty()) return 0.0;
  if (x < nodes.front() - 0.5 * cell || x > nodes.back() + 0.5 * cell) return 0.0;
  const auto k = static_cast<std::size_t>(std::clamp(
      std::llround((x - nodes.front()) / cell), 0ll,
      static_cast<long long>(nodes.size() - 1)));
  return weights[k] / cell;
}

double DiscreteMeasure::cdf(double x) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double lo = nodes[k] - 0.5 * cell, hi = nodes[k] + 0.5 * cell;
    if (x >= hi) {
      acc += weights[k];
    } else if (x > lo) {
      acc += weights[k] * (x - lo) / cell;
      break;
    } else {
      break;
    }
  }
  return acc;
}

double DiscreteMeasure::support_radius() const {
  double r = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (weights[k] > 1e-12) r = std::max(r, std::abs(nodes[k]));
  return r;
}

double DiscreteMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

DiscreteMeasure equilibrium_oracle(const Potential& v, const EquilibriumOptions& options) {
  const int n = options.grid_n;
  if (n < 10) throw InvalidSpec("equilibrium grid too small");
  if (!(options.x_max > options.x_min)) throw InvalidSpec("empty equilibrium grid range");
  if (!v.growth_ok)
    throw InvalidSpec("potential does not satisfy the growth condition");

  const double h = (options.x_max - options.x_min) / (n - 1);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) nodes[static_cast<std::size_t>(k)] = options.x_min + k * h;

  // Energy  E(w) = w^T Q w + c^T w  with the exact cell-averaged kernel.
  std::vector<double> q(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b <= a; ++b) {
      const double val = cell_kernel((a - b) * h, h);
      q[static_cast<std::size_t>(a) * n + b] = val;
      q[static_cast<std::size_t>(b) * n + a] = val;
    }
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = v.value(nodes[k]);

  // Active-set solve of   2 Q w + c = lambda on the support, w >= 0.
  std::vector<int> active(static_cast<std::size_t>(n));
  std::iota(active.begin(), active.end(), 0);
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  double lambda = 0.0;

  for (int pass = 0; pass < options.max_active_set_iterations; ++pass) {
    const std::size_t m = active.size();
    // KKT system  [2 Q_AA  1; 1^T  0] [w_A; lambda] = [-c_A; 1]
    std::vector<double> sys((m + 1) * (m + 1), 0.0);
    std::vector<double> rhs(m + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t s = 0; s < m; ++s)
        sys[r * (m + 1) + s] =
            2.0 * q[static_cast<std::size_t>(active[r]) * n + active[s]];
      sys[r * (m + 1) + m] = 1.0;
      sys[m * (m + 1) + r] = 1.0;
      rhs[r] = -c[static_cast<std::size_t>(active[r])];
    }
    rhs[m] = 1.0;
    std::vector<double> sol = num::lu_solve(std::move(sys), std::move(rhs));
    lambda = sol[m];

    // Drop cells driven negative; if none, check the complementary KKT
    // conditions on the inactive cells and re-admit violators.
    std::vector<int> next;
    next.reserve(m);
    bool dropped = false;
    for (std::size_t r = 0; r < m; ++r) {
      if (sol[r] < -1e-14) {
        dropped = true;
      } else {
        next.push_back(active[r]);
      }
    }
    if (dropped) {
      active.swap(next);
      if (active.empty()) throw SolverFailure("active set emptied out");
      continue;
    }

    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t r = 0; r < m; ++r)
      w[static_cast<std::size_t>(active[r])] = std::max(0.0, sol[r]);

    std::set<int> in_active(active.begin(), active.end());
    std::vector<int> violators;
    for (int k = 0; k < n; ++k) {
      if (in_active.count(k)) continue;
      double resid = c[static_cast<std::size_t>(k)];
      for (std::size_t r = 0; r < m; ++r)
        resid += 2.0 * q[static_cast<std::size_t>(k) * n + active[r]] * sol[r];
      if (resid < lambda - 1e-9) violators.push_back(k);
    }
    if (violators.empty()) {
      DiscreteMeasure mu;
      mu.nodes = std::move(nodes);
      mu.weights = std::move(w);
      mu.cell = h;
      // normalize away the last round-off in the mass constraint
      const double mass = mu.total_mass();
      for (double& wk : mu.weights) wk /= mass;
      return mu;
    }
    for (int k : violators) active.push_back(k);
    std::sort(active.begin(), active.end());
  }
  throw SolverFailure("active set did not settle within " +
                      std::to_string(options.max_active_set_iterations) + " passes");
}

double euler_lagrange_residual(const DiscreteMeasure& mu, const Potential& v) {
  // Evaluate at support cell midpoints (off the solve's collocation nodes).
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < mu.weights.size(); ++k)
    if (mu.weights[k] > 1e-10) support.push_back(k);
  if (support.size() < 2) throw SolverFailure("degenerate support");

  std::vector<double> lhs;
  lhs.reserve(support.size());
  double mean = 0.0, mass = 0.0;
  for (std::size_t s = 0; s + 1 < support.size(); ++s) {
    if (support[s + 1] != support[s] + 1) continue;  // only interior midpoints
    const double x = 0.5 * (mu.nodes[support[s]] + mu.nodes[support[s + 1]]);
    double field = 0.0;
    for (std::size_t k = 0; k < mu.weights.size(); ++k) {
      if (mu.weights[k] == 0.0) continue;
      field += 2.0 * mu.weights[k] * point_cell_kernel(x, mu.nodes[k], mu.cell);
    }
    const double val = field + v.value(x);
    const double wgt = mu.weights[support[s]] + mu.weights[support[s + 1]];
    lhs.push_back(val);
    mean += val * wgt;
    mass += wgt;
  }
  mean /= mass;
  double resid = 0.0;
  for (double val : lhs) resid = std::max(resid, std::abs(val - mean));
  return resid;
}

}  // namespace loggas
