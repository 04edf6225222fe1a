#include "loggas/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "loggas/numerics.hpp"
#include "loggas/point_process.hpp"

namespace loggas {

Potential quadratic_potential() {
  Potential v;
  v.name = "quad";
  v.value = [](double x) { return x * x; };
  v.derivative = [](double x) { return 2.0 * x; };
  v.growth_ok = true;
  return v;
}

Potential quartic_potential() {
  Potential v;
  v.name = "quartic";
  v.value = [](double x) { return x * x * x * x; };
  v.derivative = [](double x) { return 4.0 * x * x * x; };
  v.growth_ok = true;
  return v;
}

Potential make_potential(const std::string& name) {
  if (name == "quad") return quadratic_potential();
  if (name == "quartic") return quartic_potential();
  throw ParseError("unknown potential \"" + name + "\" (known: quad, quartic)");
}

PotentialValidation validate_potential(const Potential& v, int samples) {
  PotentialValidation out;
  const double h = 1e-6;
  for (int k = 0; k < samples; ++k) {
    const double x = -10.0 + 20.0 * (k + 0.5) / samples;
    const double fd = (v.value(x + h) - v.value(x - h)) / (2.0 * h);
    const double an = v.derivative(x);
    const double scale = std::max({std::abs(fd), std::abs(an), 1.0});
    out.max_derivative_rel_err =
        std::max(out.max_derivative_rel_err, std::abs(fd - an) / scale);
  }
  const double g3 = v.value(1e3) - 2.0 * std::log(1e3);
  const double g6 = v.value(1e6) - 2.0 * std::log(1e6);
  const double g3m = v.value(-1e3) - 2.0 * std::log(1e3);
  const double g6m = v.value(-1e6) - 2.0 * std::log(1e6);
  out.growth_confirmed = g3 > 10.0 && g6 > g3 && g3m > 10.0 && g6m > g3m;
  return out;
}

namespace {

void check_distinct(std::span<const double> points) {
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double scale =
        std::max({1.0, std::abs(sorted[i]), std::abs(sorted[i + 1])});
    if (sorted[i + 1] - sorted[i] <= 1e-300 * scale)
      throw Coincidence("two particles coincide at " + std::to_string(sorted[i]));
  }
}

double min_gap_of(std::span<const double> points) {
  std::vector<double> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    g = std::min(g, sorted[i + 1] - sorted[i]);
  return g;
}

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double hamiltonian(std::span<const double> points, const Potential& v) {
  check_distinct(points);
  const std::size_t n = points.size();
  std::vector<double> row(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    row[i] = num::pairwise_sum(i + 1, n, [&](std::size_t j) {
      return std::log(std::abs(points[i] - points[j]));
    });
  const double pair_part = -2.0 * num::pairwise_sum(row);
  const double pot = num::pairwise_sum(std::size_t{0}, n, [&](std::size_t i) {
    return v.value(points[i]);
  });
  return pair_part + static_cast<double>(n) * pot;
}

std::vector<double> hamiltonian_gradient(std::span<const double> points,
                                         const Potential& v) {
  check_distinct(points);
  const std::size_t n = points.size();
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = num::pairwise_sum(std::size_t{0}, n, [&](std::size_t j) {
      if (j == i) return 0.0;
      return 1.0 / (points[i] - points[j]);
    });
    grad[i] = -2.0 * s + static_cast<double>(n) * v.derivative(points[i]);
  }
  return grad;
}

FeketeResult fekete_optimize(const Potential& v, int n, std::span<const double> init,
                             const FeketeOptions& options) {
  if (static_cast<int>(init.size()) != n)
    throw BadLength("init size does not match n");
  std::vector<double> x(init.begin(), init.end());

  double w = hamiltonian(x, v);
  std::vector<double> g = hamiltonian_gradient(x, v);
  double gnorm = sup_norm(g);
  double step = 1.0 / std::max(1, n);
  int iter = 0;

  // Phase 1: Armijo backtracking. The energy blows up at coincidences, so
  // accepted steps can never merge particles. Stops once the guaranteed
  // decrement falls under the round-off floor of w, where the sufficient
  // decrease test is pure noise.
  int noise_hits = 0;
  while (gnorm > options.tol && iter < options.max_iterations / 2) {
    double gg = 0.0;
    for (double gi : g) gg += gi * gi;
    double t = step;
    bool accepted = false;
    std::vector<double> y(x.size());
    while (t > 1e-18) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - t * g[i];
      if (min_gap_of(y) > 0.0) {
        const double wy = hamiltonian(y, v);
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
    if (!accepted) break;
    if (1e-4 * t * gg < 64.0 * 2.2e-16 * std::max(1.0, std::abs(w))) {
      if (++noise_hits >= 5) break;
    } else {
      noise_hits = 0;
    }
    step = std::min(2.0 * t, 10.0);
    g = hamiltonian_gradient(x, v);
    gnorm = sup_norm(g);
  }

  // Phase 2: damped Jacobi polish. The Hessian diagonal dominates
  // (2 sum 1/d^2 plus the confinement curvature), so the diagonally
  // preconditioned iteration keeps contracting where energy decrements are
  // below round-off.
  if (gnorm > options.tol) {
    const double fd = 1e-5;
    double damp = 0.8;
    int rises = 0;
    std::vector<double> diag(x.size());
    while (gnorm > options.tol && iter < options.max_iterations) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (j == i) continue;
          const double d = x[i] - x[j];
          s += 1.0 / (d * d);
        }
        const double vpp =
            (v.derivative(x[i] + fd) - v.derivative(x[i] - fd)) / (2.0 * fd);
        diag[i] = 2.0 * s + static_cast<double>(x.size()) * std::max(vpp, 0.0);
      }
      for (std::size_t i = 0; i < x.size(); ++i) x[i] -= damp * g[i] / diag[i];
      if (!(min_gap_of(x) > 0.0))
        throw OrderingCollapse("particles merged during polish descent");
      g = hamiltonian_gradient(x, v);
      const double gn = sup_norm(g);
      if (gn > gnorm && ++rises >= 3) {
        damp *= 0.5;
        rises = 0;
      }
      gnorm = gn;
      ++iter;
    }
  }

  if (gnorm > options.tol)
    throw MaxIterations("Fekete gradient sup-norm " + std::to_string(gnorm) +
                        " above tol after " + std::to_string(iter) + " iterations");
  std::sort(x.begin(), x.end());
  return FeketeResult{std::move(x), w, gnorm, iter};
}

SampleSet mcmc_sample(const Potential& v, int n, double beta,
                      const McmcOptions& options) {
  if (!(beta > 0.0)) throw InvalidSpec("beta must be positive");
  if (n < 1) throw InvalidSpec("n must be >= 1");
  if (options.steps <= options.burn_in)
    throw BadSchedule("steps must exceed burn_in");
  if (options.thinning < 1 || options.thinning >= options.steps - options.burn_in)
    throw BadSchedule("thinning must lie in [1, steps - burn_in)");

  num::Rng rng(options.seed);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)  // deterministic spread over [-1, 1]
    x[static_cast<std::size_t>(i)] = n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1.0);

  double width = options.initial_width;
  const double half_beta = 0.5 * beta;

  long long accepted = 0, proposed = 0;
  long long tune_accepted = 0, tune_proposed = 0;
  SampleSet out;
  out.beta = beta;
  out.n = n;
  out.burn_in = options.burn_in;
  out.thinning = options.thinning;
  out.seed = options.seed;

  for (long long sweep = 0; sweep < options.steps; ++sweep) {
    const bool tuning = sweep < options.burn_in;
    for (int i = 0; i < n; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      const double xp = xi + width * (2.0 * rng.uniform01() - 1.0);
      // incremental energy change of moving particle i
      double delta = static_cast<double>(n) * (v.value(xp) - v.value(xi));
      bool collision = false;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dj = x[static_cast<std::size_t>(j)];
        if (xp == dj) {
          collision = true;
          break;
        }
        delta += -2.0 * (std::log(std::abs(xp - dj)) - std::log(std::abs(xi - dj)));
      }
      ++proposed;
      if (tuning) ++tune_proposed;
      if (!collision &&
          (delta <= 0.0 || rng.uniform01() < std::exp(-half_beta * delta))) {
        x[static_cast<std::size_t>(i)] = xp;
        ++accepted;
        if (tuning) ++tune_accepted;
      }
    }
    if (tuning) {
      if ((sweep + 1) % 50 == 0 && tune_proposed > 0) {
        const double rate = static_cast<double>(tune_accepted) / tune_proposed;
        width = std::clamp(width * std::exp(rate - 0.4), 1e-4, 10.0);
        tune_accepted = tune_proposed = 0;
      }
      if (sweep + 1 == options.burn_in) {
        accepted = proposed = 0;  // acceptance_rate counts the frozen phase
      }
      continue;
    }
    const long long since = sweep - options.burn_in;
    if (since % options.thinning == 0) {
      std::vector<double> state(x);
      std::sort(state.begin(), state.end());
      out.states.push_back(std::move(state));
    }
  }

  out.proposal_width = width;
  out.acceptance_rate =
      proposed > 0 ? static_cast<double>(accepted) / proposed : 0.0;
  out.acceptance_warning =
      !(out.acceptance_rate > 0.1 && out.acceptance_rate < 0.7);
  return out;
}

PairingResult empirical_pair_correlation(const SampleSet& samples,
                                         const TestFunction2D& phi, double center,
                                         double local_density) {
  if (samples.states.empty()) throw InvalidSpec("sample set is empty");
  if (!(local_density > 0.0)) throw InvalidSpec("local density must be positive");
  const double t_box = phi.half_width;
  const double scale = samples.n * local_density;

  double sum = 0.0, sum_sq = 0.0;
  long long pairs_in_box = 0;
  std::vector<double> window;
  for (const auto& state : samples.states) {
    window.clear();
    for (double x : state) {
      const double y = scale * (x - center);
      if (std::abs(y) <= t_box) window.push_back(y);
    }
    double f = 0.0;
    for (std::size_t a = 0; a < window.size(); ++a)
      for (std::size_t b = 0; b < window.size(); ++b)
        if (a != b) {
          f += phi.value(window[a], window[b]);
          ++pairs_in_box;
        }
    sum += f;
    sum_sq += f * f;
  }
  if (pairs_in_box == 0)
    throw EmptyWindow("no point pair fell inside the support box of phi");
  const std::size_t m = samples.states.size();
  const double mean = sum / static_cast<double>(m);
  double se = 0.0;
  if (m >= 2) {
    const double var =
        std::max(0.0, (sum_sq - m * mean * mean) / static_cast<double>(m - 1));
    se = std::sqrt(var / static_cast<double>(m));
  }
  return PairingResult{mean, PairingResult::Method::monte_carlo, se};
}

double rescaled_gap_variance(const SampleSet& samples, double center,
                             double local_density, double support_radius,
                             double bulk_fraction) {
  const double half = bulk_fraction * support_radius;
  const double scale = samples.n * local_density;
  double s = 0.0, s2 = 0.0;
  long long count = 0;
  for (const auto& state : samples.states) {
    for (std::size_t i = 0; i + 1 < state.size(); ++i) {
      if (std::abs(state[i] - center) > half || std::abs(state[i + 1] - center) > half)
        continue;
      const double gap = scale * (state[i + 1] - state[i]);
      s += gap;
      s2 += gap * gap;
      ++count;
    }
  }
  if (count < 2) throw EmptyWindow("fewer than 2 bulk gaps across the sample set");
  const double mean = s / count;
  return std::max(0.0, s2 / count - mean * mean);
}

double kolmogorov_distance(std::span<const double> sorted_points,
                           const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_points.size();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted_points[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i + 1) / n));
  }
  return d;
}

}  // namespace loggas
