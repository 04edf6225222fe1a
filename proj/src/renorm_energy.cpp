#include "loggas/renorm_energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "loggas/numerics.hpp"

namespace loggas {

namespace {

// Smallest circular gap of an arbitrary (unsorted, unreduced) point set.
double min_circular_gap(std::span<const double> points, int period) {
  std::vector<double> red(points.begin(), points.end());
  for (double& x : red) x -= period * std::floor(x / period);
  std::sort(red.begin(), red.end());
  double mg = period - (red.back() - red.front());
  for (std::size_t i = 0; i + 1 < red.size(); ++i)
    mg = std::min(mg, red[i + 1] - red[i]);
  return mg;
}

void check_simple(std::span<const double> points, int period) {
  if (min_circular_gap(points, period) <= TorusConfiguration::duplicate_tolerance(period))
    throw NearCoincidence("configuration has a circular gap below 1e-12 * N; "
                          "the energy is divergent at coincidence");
}

}  // namespace

double energy_periodic(std::span<const double> points, int period) {
  check_simple(points, period);
  const std::size_t n = points.size();
  const double inv = M_PI / period;
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    row[i] = num::pairwise_sum(i + 1, n, [&](std::size_t j) {
      return std::log(std::abs(2.0 * std::sin(inv * (points[i] - points[j]))));
    });
  }
  const double half_sum = num::pairwise_sum(row);
  return -(M_PI / period) * 2.0 * half_sum - M_PI * std::log(2.0 * M_PI / period);
}

double energy_periodic(const TorusConfiguration& config) {
  if (config.min_gap() <= TorusConfiguration::duplicate_tolerance(config.period()))
    throw NearCoincidence("near-coincident points");
  return energy_periodic(config.points(), config.period());
}

std::vector<double> energy_gradient(std::span<const double> points, int period) {
  check_simple(points, period);
  const std::size_t n = points.size();
  const double inv = M_PI / period;
  const double pref = -2.0 * M_PI * M_PI / (static_cast<double>(period) * period);
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = num::pairwise_sum(std::size_t{0}, n, [&](std::size_t j) {
      if (j == i) return 0.0;
      return 1.0 / std::tan(inv * (points[i] - points[j]));
    });
    grad[i] = pref * s;
  }
  return grad;
}

std::vector<double> energy_gradient(const TorusConfiguration& config) {
  return energy_gradient(config.points(), config.period());
}

double scale_energy(double w_unit, double density) {
  if (!(density > 0.0))
    throw NonpositiveDensity("density must be positive, got " + std::to_string(density));
  return density * (w_unit - M_PI * std::log(density));
}

double defect_functional(const TorusConfiguration& config, DefectNormalization normalization) {
  const int n = config.period();
  double total = 0.0;
  for (int p = 1; p <= n / 2; ++p) {
    const double inner = num::pairwise_sum(std::size_t{0}, static_cast<std::size_t>(n),
                                           [&](std::size_t i) {
      const double b = config.point(static_cast<long long>(i) + p) -
                       config.point(static_cast<long long>(i)) - p;
      return std::min(b * b / (static_cast<double>(p) * p), 1.0);
    });
    total += inner / n;
  }
  if (normalization == DefectNormalization::prefactored) total /= n;
  return total;
}

double qlb_ratio(const TorusConfiguration& config, DefectNormalization normalization) {
  const double defect = defect_functional(config, normalization);
  if (defect <= 1e-28)
    throw ZeroDefect("configuration is a lattice translate; the ratio is undefined");
  return (energy_periodic(config) - lattice_energy()) / defect;
}

EnergyReport energy_report(const TorusConfiguration& config) {
  EnergyReport r;
  r.w = energy_periodic(config);
  r.gap = r.w - lattice_energy();
  r.defect_paper_rhs = defect_functional(config, DefectNormalization::paper_rhs);
  r.defect_prefactored = defect_functional(config, DefectNormalization::prefactored);
  if (r.defect_paper_rhs > 1e-28) r.ratio = r.gap / r.defect_paper_rhs;
  return r;
}

namespace {

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Safe fixed step for the polish phase: the Hessian is a weighted graph
// Laplacian, so lambda_max <= 2 max_i H_ii.
double polish_step(std::span<const double> points, int period) {
  const std::size_t n = points.size();
  const double inv = M_PI / period;
  const double pref = 2.0 * std::pow(M_PI, 3) / std::pow(static_cast<double>(period), 3);
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double si = std::sin(inv * (points[i] - points[j]));
      s += 1.0 / (si * si);
    }
    max_diag = std::max(max_diag, pref * s);
  }
  return 1.0 / (2.0 * max_diag);
}

}  // namespace

MinimizeResult minimize_energy(const TorusConfiguration& init, const MinimizeOptions& options) {
  const int n = init.period();
  const double dup_tol = TorusConfiguration::duplicate_tolerance(n);
  std::vector<double> x(init.points().begin(), init.points().end());

  double w = energy_periodic(x, n);
  std::vector<double> g = energy_gradient(x, n);
  double gnorm = sup_norm(g);
  int iter = 0;
  double step = 0.1;

  // Phase 1: monotone descent with Armijo backtracking. Stops once the
  // guaranteed decrement falls under the round-off floor of w, where the
  // sufficient decrease test is pure noise.
  int noise_hits = 0;
  while (gnorm > options.tol && iter < options.max_iterations / 2) {
    double gg = 0.0;
    for (double gi : g) gg += gi * gi;
    double t = step;
    bool accepted = false;
    std::vector<double> y(x.size());
    while (t > 1e-18) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t * g[i];
      if (min_circular_gap(y, n) > dup_tol) {
        const double wy = energy_periodic(y, n);
        if (wy <= w - 1e-4 * t * gg) {
          x = y;
          w = wy;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    ++iter;
    if (!accepted) break;  // decrements below round-off; switch to polish
    if (1e-4 * t * gg < 64.0 * 2.2e-16 * std::max(1.0, std::abs(w))) {
      if (++noise_hits >= 5) break;
    } else {
      noise_hits = 0;
    }
    step = std::min(2.0 * t, 1e3);
    g = energy_gradient(x, n);
    gnorm = sup_norm(g);
  }

  // Phase 2: fixed-step polish. The gradient keeps contracting near the
  // minimizer even when energy differences are unresolvable in double.
  if (gnorm > options.tol) {
    double s = polish_step(x, n);
    int rises = 0;
    while (gnorm > options.tol && iter < options.max_iterations) {
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= s * g[i];
      if (min_circular_gap(x, n) <= dup_tol)
        throw NearCoincidence("points merged during polish descent");
      g = energy_gradient(x, n);
      const double gn = sup_norm(g);
      if (gn > gnorm && ++rises >= 3) {
        s *= 0.5;
        rises = 0;
      }
      gnorm = gn;
      ++iter;
    }
  }

  if (gnorm > options.tol)
    throw MaxIterations("gradient sup-norm " + std::to_string(gnorm) +
                        " above tol after " + std::to_string(iter) + " iterations");
  TorusConfiguration out(std::move(x), n);
  return MinimizeResult{out, energy_periodic(out), gnorm, iter};
}

}  // namespace loggas
