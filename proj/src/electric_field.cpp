#include "loggas/electric_field.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "loggas/numerics.hpp"

namespace loggas {

namespace {

using cplx = std::complex<double>;

// cot(w) without overflow for large |Im w|: for Im w in (0, 1] the direct
// quotient is accurate; higher up, cot(w) = i (q + 1) / (q - 1) with
// q = exp(2 i w), |q| <= e^-2. Negative half-plane by conjugation symmetry.
cplx stable_cot(cplx w) {
  if (w.imag() < 0.0) return std::conj(stable_cot(std::conj(w)));
  if (w.imag() <= 1.0) return std::cos(w) / std::sin(w);
  const cplx q = std::exp(cplx(0.0, 2.0) * w);
  return cplx(0.0, 1.0) * (q + 1.0) / (q - 1.0);
}

double wrap_delta(double dx, double period) {
  double r = std::remainder(dx, period);
  return r;
}

Vec2 field_unchecked(const TorusConfiguration& config, double x, double y) {
  const int n = config.period();
  cplx s(0.0, 0.0);
  for (double a : config.points()) {
    const double dx = wrap_delta(x - a, n);
    s += stable_cot(cplx(M_PI * dx / n, M_PI * y / n));
  }
  // E = -grad of the logarithmic potential, so that div E = 2 pi (nu - bg)
  // and the flux out of a positive charge is positive.
  const double pref = M_PI / n;
  Vec2 e{pref * s.real(), -pref * s.imag()};
  if (y > 0.0)
    e.y -= M_PI;
  else if (y < 0.0)
    e.y += M_PI;
  return e;
}

double field_norm_sq(const TorusConfiguration& config, double x, double y) {
  const Vec2 e = field_unchecked(config, x, y);
  return e.x * e.x + e.y * e.y;
}

}  // namespace

Vec2 field_at(const TorusConfiguration& config, double x, double y) {
  const double guard = 1e-14 * config.period();
  for (double a : config.points()) {
    if (std::hypot(wrap_delta(x - a, config.period()), y) < guard)
      throw AtCharge("evaluation point within 1e-14 * N of a charge");
  }
  return field_unchecked(config, x, y);
}

QuadratureSpec QuadratureSpec::defaults_for(const TorusConfiguration& config) {
  QuadratureSpec spec;
  const double g = config.min_gap();
  spec.eta_levels = {g / 8.0, g / 16.0, g / 32.0, g / 64.0};
  spec.y_max = 2.0 * config.period();
  spec.tol = 1e-2;
  return spec;
}

namespace {

struct IntegrandRef {
  const TorusConfiguration& config;
  double operator()(double x, double y) const { return field_norm_sq(config, x, y); }
};

// Tensor Gauss-Legendre over [x0,x1] x [y0,y1].
double gl_rect(const IntegrandRef& f, double x0, double x1, double y0, double y1,
               int order) {
  const auto& gl = num::gauss_legendre(order);
  const double xm = 0.5 * (x0 + x1), xh = 0.5 * (x1 - x0);
  const double ym = 0.5 * (y0 + y1), yh = 0.5 * (y1 - y0);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.node.size(); ++i) {
    const double x = xm + xh * gl.node[i];
    double row = 0.0;
    for (std::size_t j = 0; j < gl.node.size(); ++j)
      row += gl.weight[j] * f(x, ym + yh * gl.node[j]);
    s += gl.weight[i] * row;
  }
  return s * xh * yh;
}

// Radial integral int_eta^rho |E|^2 r dr at fixed angle, on log-spaced panels.
double radial_integral(const IntegrandRef& f, double cx, double ct, double st,
                       double eta, double rho, int panels_per_octave, int order) {
  double s = 0.0;
  double r0 = eta;
  while (r0 < rho) {
    const double octave_end = std::min(2.0 * r0, rho);
    const int sub = std::max(1, panels_per_octave);
    for (int k = 0; k < sub; ++k) {
      const double a = r0 + (octave_end - r0) * k / sub;
      const double b = r0 + (octave_end - r0) * (k + 1) / sub;
      s += num::gl_integrate(
          [&](double r) { return f(cx + r * ct, r * st) * r; }, a, b, order);
    }
    r0 = octave_end;
  }
  return s;
}

// Panel boundaries over [lo, hi] growing geometrically (x2) away from both
// ends, starting at size h0; resolves integrands whose smoothness scale is
// the distance to the interval ends.
std::vector<double> geometric_panels(double lo, double hi, double h0) {
  const double len = hi - lo;
  std::vector<double> left{lo}, right{hi};
  double step = h0;
  while (left.back() + step < lo + 0.5 * len) {
    left.push_back(left.back() + step);
    step *= 2.0;
  }
  step = h0;
  while (right.back() - step > hi - 0.5 * len) {
    right.push_back(right.back() - step);
    step *= 2.0;
  }
  for (std::size_t k = right.size(); k-- > 0;) left.push_back(right[k]);
  return left;
}

// Polar cap around one charge: the box [a-c, a+c] x [0, c] minus the upper
// half-disk of radius eta, in polar coordinates with the theta-dependent
// outer radius rho(theta) tracing the box boundary.
double cap_integral(const IntegrandRef& f, double charge_x, double c, double eta,
                    const QuadratureSpec& spec) {
  struct Range {
    double t0, t1;
    int kind;  // 0: rho = c/cos, 1: rho = c/sin, 2: rho = -c/cos
  };
  const Range ranges[3] = {{0.0, M_PI / 4.0, 0},
                           {M_PI / 4.0, 3.0 * M_PI / 4.0, 1},
                           {3.0 * M_PI / 4.0, M_PI, 2}};
  double total = 0.0;
  for (const Range& rg : ranges) {
    const int sub = std::max(1, spec.theta_subdivisions) * (rg.kind == 1 ? 2 : 1);
    for (int k = 0; k < sub; ++k) {
      const double t0 = rg.t0 + (rg.t1 - rg.t0) * k / sub;
      const double t1 = rg.t0 + (rg.t1 - rg.t0) * (k + 1) / sub;
      total += num::gl_integrate(
          [&](double theta) {
            const double rho = rg.kind == 0   ? c / std::cos(theta)
                               : rg.kind == 1 ? c / std::sin(theta)
                                              : -c / std::cos(theta);
            return radial_integral(f, charge_x, std::cos(theta), std::sin(theta),
                                   eta, rho, spec.radial_panels_per_octave,
                                   spec.gl_order);
          },
          t0, t1, spec.gl_order);
    }
  }
  return total;
}

}  // namespace

ViaDefinitionResult energy_via_definition(const TorusConfiguration& config,
                                          const QuadratureSpec& spec) {
  const int n = config.period();
  const double g = config.min_gap();
  const double c = 0.5 * g;

  if (spec.eta_levels.size() < 3)
    throw InvalidSpec("need at least 3 eta levels for extrapolation");
  for (std::size_t k = 0; k < spec.eta_levels.size(); ++k) {
    const double eta = spec.eta_levels[k];
    if (!(eta > 0.0) || eta >= c)
      throw InvalidSpec("eta levels must lie in (0, min_gap / 2)");
    if (k > 0 && eta >= spec.eta_levels[k - 1])
      throw InvalidSpec("eta levels must be strictly decreasing");
  }
  if (spec.y_max < n) throw InvalidSpec("y_max must be at least the period");

  const IntegrandRef f{config};
  const auto pts = config.points();

  // Window cut in the middle of the wrap gap, so no cap crosses the boundary.
  const double wrap_gap = n - (pts.back() - pts.front());
  const double x_left = pts.front() - 0.5 * wrap_gap;

  // eta-independent part: rectangles along the charge line between the caps,
  // then the tensor grid above height c.
  double base = 0.0;
  {
    std::vector<double> cuts;
    cuts.push_back(x_left);
    for (double a : pts) {
      cuts.push_back(a - c);
      cuts.push_back(a + c);
    }
    cuts.push_back(x_left + n);
    // bottom rectangles: the intervals between consecutive caps,
    // [x_left, a_0 - c], [a_i + c, a_{i+1} - c], ..., [a_{N-1} + c, x_left + N];
    // x panels grow geometrically away from the adjacent charges
    for (std::size_t s = 0; s + 1 < cuts.size(); s += 2) {
      const double lo = cuts[s], hi = cuts[s + 1];
      if (hi - lo <= 1e-12) continue;
      const auto xb = geometric_panels(lo, hi, std::min(c, hi - lo));
      const int ny = std::max(1, spec.bottom_y_panels);
      for (std::size_t ix = 0; ix + 1 < xb.size(); ++ix)
        for (int iy = 0; iy < ny; ++iy)
          base +=
              gl_rect(f, xb[ix], xb[ix + 1], c * iy / ny, c * (iy + 1) / ny,
                      spec.gl_order);
    }
    // top region: y octaves growing geometrically from c (the integrand
    // decays like exp(-4 pi y / N)); within each octave the x panels refine
    // toward the charges down to the octave height.
    std::vector<double> yb;
    yb.push_back(c);
    while (yb.back() < spec.y_max) yb.push_back(std::min(2.0 * yb.back(), spec.y_max));
    std::vector<double> gap_edges;
    gap_edges.push_back(x_left);
    for (double a : pts) gap_edges.push_back(a);
    gap_edges.push_back(x_left + n);
    for (std::size_t j = 0; j + 1 < yb.size(); ++j) {
      const double y0 = yb[j], y1 = yb[j + 1];
      for (std::size_t i = 0; i + 1 < gap_edges.size(); ++i) {
        const double lo = gap_edges[i], hi = gap_edges[i + 1];
        if (hi - lo <= 1e-12) continue;
        const auto xb = geometric_panels(lo, hi, std::min(y0, hi - lo));
        for (std::size_t ix = 0; ix + 1 < xb.size(); ++ix)
          base += gl_rect(f, xb[ix], xb[ix + 1], y0, y1, spec.gl_order);
      }
    }
  }

  ViaDefinitionResult out;
  out.eta = spec.eta_levels;
  out.bracket.resize(out.eta.size());
  for (std::size_t k = 0; k < out.eta.size(); ++k) {
    const double eta = out.eta[k];
    double caps = 0.0;
    for (double a : pts) caps += cap_integral(f, a, c, eta, spec);
    out.bracket[k] = (base + caps) / n + M_PI * std::log(eta);
  }

  // Quadratic Richardson extrapolation through a triple of levels; the bias
  // is c1 eta + c2 eta^2 (c1 -> 4 pi: the excluded half-ball against the
  // background field), so this removes both leading terms.
  const std::size_t levels = out.eta.size();
  auto quad_extrap = [&](std::size_t a, std::size_t b, std::size_t c) {
    const double ea = out.eta[a], eb = out.eta[b], ec = out.eta[c];
    return out.bracket[a] * (eb * ec) / ((eb - ea) * (ec - ea)) +
           out.bracket[b] * (ea * ec) / ((ea - eb) * (ec - eb)) +
           out.bracket[c] * (ea * eb) / ((ea - ec) * (eb - ec));
  };
  out.value = quad_extrap(levels - 3, levels - 2, levels - 1);

  // Disagreement between the two finest extrapolants. With only 3 levels the
  // comparison against the linear extrapolant of the finest pair is used; it
  // overstates the true error (it measures the removed quadratic term), so
  // 3-level plans need a correspondingly looser tol.
  if (levels >= 4) {
    out.error_estimate =
        std::abs(out.value - quad_extrap(levels - 4, levels - 3, levels - 2));
  } else {
    const double e0 = out.eta[levels - 2], e1 = out.eta[levels - 1];
    const double lin = out.bracket[levels - 1] +
                       (out.bracket[levels - 1] - out.bracket[levels - 2]) * e1 /
                           (e0 - e1);
    out.error_estimate = std::abs(out.value - lin);
  }
  if (out.error_estimate > spec.tol)
    throw MeshTooCoarse("finest eta extrapolants disagree by " +
                        std::to_string(out.error_estimate) + " > tol " +
                        std::to_string(spec.tol));

  // Least-squares linear fit of the bracket in eta (reported diagnostics).
  {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(levels);
    for (std::size_t k = 0; k < levels; ++k) {
      sx += out.eta[k];
      sy += out.bracket[k];
      sxx += out.eta[k] * out.eta[k];
      sxy += out.eta[k] * out.bracket[k];
    }
    const double denom = m * sxx - sx * sx;
    out.c1 = (m * sxy - sx * sy) / denom;
    const double c0 = (sy - out.c1 * sx) / m;
    for (std::size_t k = 0; k < levels; ++k)
      out.fit_residual = std::max(
          out.fit_residual, std::abs(out.bracket[k] - (c0 + out.c1 * out.eta[k])));
  }
  return out;
}

double flux_around_charge(const TorusConfiguration& config, int charge_index,
                          double radius, int panels_per_half, int gl_order) {
  if (charge_index < 0 || charge_index >= config.period())
    throw InvalidSpec("charge index out of range");
  if (!(radius > 0.0) || radius >= config.min_gap())
    throw InvalidSpec("flux radius must lie in (0, min_gap)");
  const double a = config.points()[static_cast<std::size_t>(charge_index)];
  double flux = 0.0;
  // split at theta = 0 and pi where the background field has a corner
  for (int half = 0; half < 2; ++half) {
    const double t0 = half * M_PI, t1 = (half + 1) * M_PI;
    for (int k = 0; k < panels_per_half; ++k) {
      const double p0 = t0 + (t1 - t0) * k / panels_per_half;
      const double p1 = t0 + (t1 - t0) * (k + 1) / panels_per_half;
      flux += num::gl_integrate(
          [&](double theta) {
            const double ct = std::cos(theta), st = std::sin(theta);
            const Vec2 e = field_unchecked(config, a + radius * ct, radius * st);
            return (e.x * ct + e.y * st) * radius;
          },
          p0, p1, gl_order);
    }
  }
  return flux;
}

double circulation_rectangle(const TorusConfiguration& config, double x0, double y0,
                             double x1, double y1, int panels_per_edge, int gl_order) {
  auto edge = [&](double ax, double ay, double bx, double by) {
    const double len_x = bx - ax, len_y = by - ay;
    double s = 0.0;
    for (int k = 0; k < panels_per_edge; ++k) {
      const double u0 = static_cast<double>(k) / panels_per_edge;
      const double u1 = static_cast<double>(k + 1) / panels_per_edge;
      s += num::gl_integrate(
          [&](double u) {
            const Vec2 e = field_at(config, ax + u * len_x, ay + u * len_y);
            return e.x * len_x + e.y * len_y;
          },
          u0, u1, gl_order);
    }
    return s;
  };
  return edge(x0, y0, x1, y0) + edge(x1, y0, x1, y1) + edge(x1, y1, x0, y1) +
         edge(x0, y1, x0, y0);
}

}  // namespace loggas
