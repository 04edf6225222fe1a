#include "loggas/torus_config.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace loggas {

namespace {

double reduce_mod(double x, double period) {
  double r = x - period * std::floor(x / period);
  if (r >= period) r -= period;  // floor rounding can land exactly on period
  if (r < 0.0) r += period;
  return r;
}

}  // namespace

TorusConfiguration::TorusConfiguration(std::vector<double> points, int period)
    : points_(std::move(points)), period_(period) {
  if (period_ < 2) throw BadLength("period must be >= 2, got " + std::to_string(period_));
  if (points_.size() != static_cast<std::size_t>(period_))
    throw BadLength("expected " + std::to_string(period_) + " points, got " +
                    std::to_string(points_.size()));
  for (double& x : points_) {
    if (!std::isfinite(x)) throw NonFiniteInput("configuration point is not finite");
    x = reduce_mod(x, period_);
  }
  std::sort(points_.begin(), points_.end());
  const double tol = duplicate_tolerance(period_);
  min_gap_ = period_ - (points_.back() - points_.front());
  for (std::size_t i = 0; i + 1 < points_.size(); ++i)
    min_gap_ = std::min(min_gap_, points_[i + 1] - points_[i]);
  if (min_gap_ <= tol)
    throw DuplicatePoint("two points coincide mod " + std::to_string(period_) +
                         " (min gap " + std::to_string(min_gap_) + ")");
}

TorusConfiguration TorusConfiguration::lattice(int period) {
  std::vector<double> pts(static_cast<std::size_t>(period));
  for (int k = 0; k < period; ++k) pts[static_cast<std::size_t>(k)] = k;
  return TorusConfiguration(std::move(pts), period);
}

TorusConfiguration TorusConfiguration::perturbed_lattice(int period, int mode,
                                                         double amplitude) {
  if (period < 2) throw BadLength("period must be >= 2");
  if (mode < 1 || mode > period - 1)
    throw InvalidSpec("mode must lie in [1, N-1], got " + std::to_string(mode));
  if (!(std::abs(amplitude) < 0.5))
    throw AmplitudeTooLarge("|amplitude| must be < 1/2 to keep points ordered, got " +
                            std::to_string(amplitude));
  std::vector<double> pts(static_cast<std::size_t>(period));
  for (int k = 0; k < period; ++k)
    pts[static_cast<std::size_t>(k)] =
        k + amplitude * std::sin(2.0 * M_PI * mode * k / period);
  return TorusConfiguration(std::move(pts), period);
}

double TorusConfiguration::point(long long index) const noexcept {
  const long long n = period_;
  long long q = index / n;
  long long r = index % n;
  if (r < 0) {
    r += n;
    --q;
  }
  return points_[static_cast<std::size_t>(r)] + static_cast<double>(q) * period_;
}

TorusConfiguration TorusConfiguration::translated(double shift) const {
  std::vector<double> pts(points_);
  for (double& x : pts) x += shift;
  return TorusConfiguration(std::move(pts), period_);
}

DefectTable::DefectTable(const TorusConfiguration& config) : period_(config.period()) {
  const int n = period_;
  u_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int p = 1; p <= n; ++p)
    for (int i = 1; i <= n; ++i)
      u_[idx(p, i)] = config.point(i - 1 + p) - config.point(i - 1);
}

std::size_t DefectTable::idx(int p, int i) const {
  return static_cast<std::size_t>(p - 1) * static_cast<std::size_t>(period_) +
         static_cast<std::size_t>(i - 1);
}

double DefectTable::row_sum_u(int p) const {
  double s = 0.0;
  for (int i = 1; i <= period_; ++i) s += u(p, i);
  return s;
}

double DefectTable::max_abs_b(int p) const {
  double m = 0.0;
  for (int i = 1; i <= period_; ++i) m = std::max(m, std::abs(b(p, i)));
  return m;
}

}  // namespace loggas
