#pragma once

#include <span>
#include <vector>

#include "loggas/errors.hpp"

namespace loggas {

// A simple N-point configuration on the circle of circumference N (unit mean
// density). Points are stored strictly increasing in the fundamental window
// [0, N); index arithmetic for the periodic extension a_{i+kN} = a_i + kN is
// centralized in point(). Immutable after construction.
class TorusConfiguration {
 public:
  // Validating constructor: reduces the inputs mod N into [0, N), sorts them
  // and rejects configurations that are not simple. Points closer than
  // 1e-12 * N (on the circle) count as duplicates.
  TorusConfiguration(std::vector<double> points, int period);

  static TorusConfiguration lattice(int period);

  // Sinusoidally perturbed lattice: site k (k = 0..N-1) is placed at
  //   k + amplitude * sin(2*pi*mode*k / N).
  // Requires |amplitude| < 1/2 so ordering cannot break. Mode aliasing: modes
  // q and N-q give the same family up to the sign of the amplitude, and for
  // even N the mode q = N/2 is degenerate (the sine vanishes at every site,
  // so the unperturbed lattice is returned).
  static TorusConfiguration perturbed_lattice(int period, int mode, double amplitude);

  int period() const noexcept { return period_; }
  int size() const noexcept { return period_; }
  std::span<const double> points() const noexcept { return points_; }

  // Periodic extension, 0-based: point(i + k*N) == point(i) + k*N for any
  // integer k (including negative indices).
  double point(long long index) const noexcept;

  // Smallest circular gap between neighbouring points (includes the wrap).
  double min_gap() const noexcept { return min_gap_; }

  TorusConfiguration translated(double shift) const;

  static double duplicate_tolerance(int period) { return 1e-12 * period; }

 private:
  std::vector<double> points_;
  int period_;
  double min_gap_;
};

// Neighbour spacings u(p,i) = a_{i+p} - a_i and defects b(p,i) = u(p,i) - p
// for 1 <= p <= N, 1 <= i <= N (1-based, matching the usual math indexing).
// Row sums satisfy sum_i u(p,i) = p*N exactly up to round-off.
class DefectTable {
 public:
  explicit DefectTable(const TorusConfiguration& config);

  int period() const noexcept { return period_; }
  double u(int p, int i) const { return u_[idx(p, i)]; }
  double b(int p, int i) const { return u_[idx(p, i)] - p; }
  double row_sum_u(int p) const;
  double max_abs_b(int p) const;

 private:
  std::size_t idx(int p, int i) const;
  std::vector<double> u_;
  int period_;
};

inline DefectTable defect_table(const TorusConfiguration& config) {
  return DefectTable(config);
}

// Density parameter for the scaling relation; the only invariant is m > 0.
struct ScalingParams {
  double density = 1.0;
};

}  // namespace loggas
