#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "loggas/point_process.hpp"
#include "loggas/test_function.hpp"

namespace loggas {

// Confining potential with analytic derivative. growth_ok asserts
// V(x) - 2 log|x| -> +infinity, required for the equilibrium measure.
struct Potential {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  bool growth_ok = false;
};

Potential quadratic_potential();  // V(x) = x^2
Potential quartic_potential();    // V(x) = x^4
Potential make_potential(const std::string& name);  // registry for the CLI

struct PotentialValidation {
  double max_derivative_rel_err = 0.0;  // vs central differences on [-10, 10]
  bool growth_confirmed = false;        // numerically at |x| = 1e3, 1e6
};
PotentialValidation validate_potential(const Potential& v, int samples = 200);

// N-particle Hamiltonian  -sum_{i != j} log|x_i - x_j| + N sum_i V(x_i).
// Throws Coincidence when two points are within 1e-300 relative distance.
double hamiltonian(std::span<const double> points, const Potential& v);

// d/dx_i = -2 sum_{j != i} 1 / (x_i - x_j) + N V'(x_i)
std::vector<double> hamiltonian_gradient(std::span<const double> points,
                                         const Potential& v);

struct FeketeOptions {
  double tol = 1e-10;  // gradient sup-norm target
  int max_iterations = 400000;
};

struct FeketeResult {
  std::vector<double> points;  // strictly increasing
  double w_value = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
};

// Minimizes the Hamiltonian by backtracking gradient descent with a
// fixed-step polish. Throws MaxIterations on budget exhaustion and
// OrderingCollapse if two points merge during the polish phase.
FeketeResult fekete_optimize(const Potential& v, int n, std::span<const double> init,
                             const FeketeOptions& options = {});

struct McmcOptions {
  long long steps = 20000;    // full sweeps (N single-site proposals each)
  long long burn_in = 4000;   // sweeps discarded; proposal width tuned here
  long long thinning = 10;    // record every `thinning` sweeps after burn-in
  std::uint64_t seed = 42;
  double initial_width = 0.5;
};

struct SampleSet {
  std::vector<std::vector<double>> states;  // recorded, each sorted
  double beta = 0.0;
  int n = 0;
  long long burn_in = 0;
  long long thinning = 0;
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;  // post burn-in, frozen proposal width
  double proposal_width = 0.0;
  bool acceptance_warning = false;  // rate outside (0.1, 0.7)
};

// Component-wise Metropolis random walk targeting exp(-(beta/2) w_N); the
// beta/2 convention matches the usual beta-ensemble normalization. The
// proposal width is auto-tuned toward ~0.4 acceptance during burn-in, then
// frozen. Deterministic given the seed. Throws BadSchedule for inconsistent
// (steps, burn_in, thinning).
SampleSet mcmc_sample(const Potential& v, int n, double beta,
                      const McmcOptions& options = {});

// Pairing of the rescaled empirical two-point function against phi: each
// recorded state is blown up by x -> N * local_density * (x - center), pair
// sums are averaged over states and the standard error reported. Throws
// EmptyWindow when no pair lands in the support box across all states.
PairingResult empirical_pair_correlation(const SampleSet& samples,
                                         const TestFunction2D& phi, double center,
                                         double local_density);

// Variance of N * local_density * (nearest-neighbour gaps) restricted to the
// bulk window |x - center| <= bulk_fraction * support_radius.
double rescaled_gap_variance(const SampleSet& samples, double center,
                             double local_density, double support_radius,
                             double bulk_fraction = 0.2);

// Kolmogorov distance between the empirical CDF of sorted points and a
// piecewise-linear CDF.
double kolmogorov_distance(std::span<const double> sorted_points,
                           const std::function<double(double)>& cdf);

}  // namespace loggas
