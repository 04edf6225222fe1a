#pragma once

#include <cstdint>
#include <span>

#include "loggas/test_function.hpp"
#include "loggas/torus_config.hpp"

namespace loggas {

struct PairingResult {
  enum class Method { exact_quadrature, monte_carlo };
  double value = 0.0;
  Method method = Method::exact_quadrature;
  double error_estimate = 0.0;  // two-mesh-level difference, or MC standard error
};

// Sum of phi over ordered pairs of distinct points. `covered_lo/hi` declare
// the interval of the line the supplied window is guaranteed to cover; it
// must contain [-T, T] (support box of phi) or WindowTooSmall is thrown.
double pair_sum(std::span<const double> points, double covered_lo, double covered_hi,
                const TestFunction2D& phi);

// int over x of phi(x, x + shift) — the shared 1D kernel of both pairings.
// Adaptive quadrature at absolute tolerance `tol`.
double diagonal_integral(const TestFunction2D& phi, double shift, double tol);

// Pairing of phi against the two-point correlation of the stationary lattice
// process: sum_{k != 0} int phi(x, x + k) dx, truncated at |k| > 2T.
PairingResult pairing_lattice(const TestFunction2D& phi, double tol = 1e-10);

// Pairing against the stationary process of a periodic configuration:
// (1/N) sum_i sum_{p != 0} int phi(x, x + u(p,i)) dx, with the p-sum
// truncated once the spacing exceeds 2T (u is monotone in p).
PairingResult pairing_periodic(const TorusConfiguration& config,
                               const TestFunction2D& phi, double tol = 1e-10);

// Monte Carlo version: averages the pair sum of the translated configuration
// over uniform shifts t in [0, N). error_estimate is the standard error.
PairingResult pairing_periodic_mc(const TorusConfiguration& config,
                                  const TestFunction2D& phi, int samples,
                                  std::uint64_t seed);

// |pairing_periodic - pairing_lattice|
double correlation_gap(const TorusConfiguration& config, const TestFunction2D& phi,
                       double tol = 1e-10);

struct Theorem1Check {
  double lhs = 0.0;       // correlation gap
  double sqrt_gap = 0.0;  // (W - W(Z))^{1/2}
  double ratio = 0.0;     // lhs / sqrt_gap
};

// Throws ZeroGap when the energy gap is <= 1e-14 (lattice translates).
Theorem1Check theorem1_check(const TorusConfiguration& config,
                             const TestFunction2D& phi, double tol = 1e-10);

struct CountStats {
  double t_half_width = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_square = 0.0;
};

// Exact first and second moments of the number of points in [-T, T] under
// the stationary process of the configuration, by enumerating the
// breakpoints of the piecewise-constant count over one period (no sampling).
CountStats count_statistics(const TorusConfiguration& config, double t_half_width);

}  // namespace loggas
