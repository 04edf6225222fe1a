#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "loggas/errors.hpp"

namespace loggas::num {

// Pairwise (cascade) summation of f(i) for i in [lo, hi). Error grows like
// log2(n)*eps instead of n*eps, which the O(N^2) energy sums rely on.
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, F&& f) {
  const std::size_t n = hi - lo;
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum(lo, mid, f) + pairwise_sum(mid, hi, f);
}

inline double pairwise_sum(std::span<const double> xs) {
  return pairwise_sum(std::size_t{0}, xs.size(), [&](std::size_t i) { return xs[i]; });
}

// Gauss-Legendre nodes/weights on [-1,1], computed once per order and cached.
struct GaussLegendre {
  std::vector<double> node;
  std::vector<double> weight;
};
const GaussLegendre& gauss_legendre(int order);

template <class F>
double gl_integrate(F&& f, double a, double b, int order) {
  const GaussLegendre& gl = gauss_legendre(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < gl.node.size(); ++k)
    s += gl.weight[k] * f(mid + half * gl.node[k]);
  return s * half;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // accumulated local error estimate
};

// Adaptive Simpson with absolute tolerance. Throws QuadratureFailure if the
// recursion depth budget is exhausted before the local tolerance is met.
QuadResult adaptive_simpson(const std::function<double(double)>& f, double a,
                            double b, double abs_tol, int max_depth = 48);

// Solves A x = b by LU with partial pivoting; A row-major n x n, consumed.
// Throws SolverFailure on (numerical) singularity.
std::vector<double> lu_solve(std::vector<double> a, std::vector<double> b);

std::uint64_t splitmix64(std::uint64_t x);

// Derives a stream seed for task `index` from a base seed. Used so that
// parallel sweeps are reproducible independently of the thread count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

// Thin deterministic RNG wrapper. Uniform doubles are produced from the raw
// 64-bit stream directly so results do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next_u64() { return eng_(); }
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }

 private:
  std::mt19937_64 eng_;
};

// Number of worker threads: LOGGAS_THREADS if set (clamped to >=1), else
// hardware concurrency.
int max_threads();

// Runs body(i) for i in [0, n). Work is distributed over threads but any
// output indexed by i is deterministic regardless of thread count. The first
// exception thrown by a task is rethrown after all threads join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace loggas::num
