#include "loggas/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "loggas/numerics.hpp"
#include "loggas/renorm_energy.hpp"

namespace loggas {

double pair_sum(std::span<const double> points, double covered_lo, double covered_hi,
                const TestFunction2D& phi) {
  const double t = phi.half_width;
  if (covered_lo > -t || covered_hi < t)
    throw WindowTooSmall("window [" + std::to_string(covered_lo) + ", " +
                         std::to_string(covered_hi) + "] does not cover the support box [-" +
                         std::to_string(t) + ", " + std::to_string(t) + "]");
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (std::abs(points[i]) > t) continue;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i || std::abs(points[j]) > t) continue;
      s += phi.value(points[i], points[j]);
    }
  }
  return s;
}

double diagonal_integral(const TestFunction2D& phi, double shift, double tol) {
  const double t = phi.half_width;
  const double lo = std::max(-t, -t - shift);
  const double hi = std::min(t, t - shift);
  if (lo >= hi) return 0.0;
  return num::adaptive_simpson([&](double x) { return phi.value(x, x + shift); },
                               lo, hi, tol)
      .value;
}

namespace {

// Memoized diagonal integrals for one pairing evaluation; periodic
// configurations repeat the same spacing many times (exactly so for
// lattices), so this is a large win at no accuracy cost.
class DiagonalKernel {
 public:
  DiagonalKernel(const TestFunction2D& phi, double tol) : phi_(phi), tol_(tol) {}

  double operator()(double shift) {
    std::uint64_t key;
    static_assert(sizeof(key) == sizeof(shift));
    std::memcpy(&key, &shift, sizeof(key));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = diagonal_integral(phi_, shift, tol_);
    cache_.emplace(key, v);
    return v;
  }

 private:
  const TestFunction2D& phi_;
  double tol_;
  std::unordered_map<std::uint64_t, double> cache_;
};

double lattice_pairing_once(const TestFunction2D& phi, double per_integral_tol) {
  const int kmax = static_cast<int>(std::floor(2.0 * phi.half_width));
  double s = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    s += diagonal_integral(phi, k, per_integral_tol);
    s += diagonal_integral(phi, -k, per_integral_tol);
  }
  return s;
}

double periodic_pairing_once(const TorusConfiguration& config,
                             const TestFunction2D& phi, double per_integral_tol) {
  const int n = config.period();
  const double reach = 2.0 * phi.half_width;
  DiagonalKernel kernel(phi, per_integral_tol);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ai = config.point(i);
    for (int p = 1;; ++p) {  // u is increasing in p, so the break is exact
      const double u = config.point(i + p) - ai;
      if (u > reach) break;
      total += kernel(u);
    }
    for (int p = -1;; --p) {
      const double u = config.point(i + p) - ai;
      if (u < -reach) break;
      total += kernel(u);
    }
  }
  return total / n;
}

}  // namespace

PairingResult pairing_lattice(const TestFunction2D& phi, double tol) {
  const int kmax = static_cast<int>(std::floor(2.0 * phi.half_width));
  const double per = tol / std::max(1, 2 * kmax);
  const double fine = lattice_pairing_once(phi, per);
  const double coarse = lattice_pairing_once(phi, 16.0 * per);
  return PairingResult{fine, PairingResult::Method::exact_quadrature,
                       std::abs(fine - coarse)};
}

PairingResult pairing_periodic(const TorusConfiguration& config,
                               const TestFunction2D& phi, double tol) {
  const double n_integrals =
      config.period() * (4.0 * phi.half_width + 2.0);  // upper estimate
  const double per = tol / n_integrals;
  const double fine = periodic_pairing_once(config, phi, per);
  const double coarse = periodic_pairing_once(config, phi, 16.0 * per);
  return PairingResult{fine, PairingResult::Method::exact_quadrature,
                       std::abs(fine - coarse)};
}

PairingResult pairing_periodic_mc(const TorusConfiguration& config,
                                  const TestFunction2D& phi, int samples,
                                  std::uint64_t seed) {
  if (samples < 2) throw InvalidSpec("need at least 2 Monte Carlo samples");
  const int n = config.period();
  const double t_box = phi.half_width;
  num::Rng rng(seed);
  double sum = 0.0, sum_sq = 0.0;
  std::vector<double> window;
  for (int s = 0; s < samples; ++s) {
    const double shift = rng.uniform(0.0, n);
    window.clear();
    // indices j with point(j) - shift possibly inside [-T, T]
    const long long j_lo = static_cast<long long>(std::floor(shift - t_box)) - n;
    const long long j_hi = static_cast<long long>(std::ceil(shift + t_box)) + n;
    for (long long j = j_lo; j <= j_hi; ++j) {
      const double x = config.point(j) - shift;
      if (std::abs(x) <= t_box) window.push_back(x);
    }
    double f = 0.0;
    for (std::size_t a = 0; a < window.size(); ++a)
      for (std::size_t b = 0; b < window.size(); ++b)
        if (a != b) f += phi.value(window[a], window[b]);
    sum += f;
    sum_sq += f * f;
  }
  const double mean = sum / samples;
  const double var = std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1));
  return PairingResult{mean, PairingResult::Method::monte_carlo,
                       std::sqrt(var / samples)};
}

double correlation_gap(const TorusConfiguration& config, const TestFunction2D& phi,
                       double tol) {
  return std::abs(pairing_periodic(config, phi, tol).value -
                  pairing_lattice(phi, tol).value);
}

Theorem1Check theorem1_check(const TorusConfiguration& config,
                             const TestFunction2D& phi, double tol) {
  const double gap = energy_periodic(config) - lattice_energy();
  if (gap <= 1e-14)
    throw ZeroGap("energy gap is zero up to round-off; the ratio is undefined");
  Theorem1Check out;
  out.lhs = correlation_gap(config, phi, tol);
  out.sqrt_gap = std::sqrt(gap);
  out.ratio = out.lhs / out.sqrt_gap;
  return out;
}

CountStats count_statistics(const TorusConfiguration& config, double t_half_width) {
  if (!(t_half_width > 0.0)) throw InvalidSpec("T must be positive");
  const int n = config.period();
  const double window = 2.0 * t_half_width;
  const double whole = std::floor(window / n);
  const double rem = window - whole * n;  // sliding remainder window [s, s+rem)
  const double base = whole * n;          // every point counted `whole` times

  CountStats out;
  out.t_half_width = t_half_width;
  if (rem == 0.0) {
    out.mean = base;
    out.variance = 0.0;
    out.mean_square = base * base;
    return out;
  }

  auto wrap = [&](double x) {
    double r = std::fmod(x, static_cast<double>(n));
    return r < 0.0 ? r + n : r;
  };

  std::vector<double> cuts;
  cuts.reserve(2 * static_cast<std::size_t>(n));
  for (double a : config.points()) {
    cuts.push_back(wrap(a - rem));
    cuts.push_back(wrap(a));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14; }),
             cuts.end());

  double mean_r = 0.0, mean_sq = 0.0;
  const std::size_t m = cuts.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double s0 = cuts[k];
    const double s1 = (k + 1 < m) ? cuts[k + 1] : cuts[0] + n;
    const double len = s1 - s0;
    if (len <= 0.0) continue;
    const double mid = 0.5 * (s0 + s1);
    int count = 0;
    for (double a : config.points()) {
      double d = wrap(a - mid);
      if (d < rem) ++count;
    }
    mean_r += count * len;
    const double c_total = base + count;
    mean_sq += c_total * c_total * len;
  }
  mean_r /= n;
  mean_sq /= n;
  out.mean = base + mean_r;
  out.mean_square = mean_sq;
  out.variance = mean_sq - out.mean * out.mean;
  return out;
}

}  // namespace loggas
