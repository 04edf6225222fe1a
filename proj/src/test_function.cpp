#include "loggas/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

double smootherstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smootherstep_prime(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

constexpr double kBumpSlopeMax = 1.875;  // max |s'| = 30/16

}  // namespace

double bump(double u) { return smootherstep(1.0 - std::abs(u)); }

double bump_prime(double u) {
  const double s = u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
  return -s * smootherstep_prime(1.0 - std::abs(u));
}

TestFunction2D box_bump(double cx, double cy, double hx, double hy, double amp) {
  if (!(hx > 0.0) || !(hy > 0.0)) throw InvalidSpec("bump half-widths must be positive");
  TestFunction2D phi;
  phi.value = [=](double x, double y) {
    return amp * bump((x - cx) / hx) * bump((y - cy) / hy);
  };
  phi.gradient = [=](double x, double y) {
    const double bx = bump((x - cx) / hx), by = bump((y - cy) / hy);
    return Vec2{amp * bump_prime((x - cx) / hx) / hx * by,
                amp * bx * bump_prime((y - cy) / hy) / hy};
  };
  phi.half_width = std::max({std::abs(cx) + hx, std::abs(cy) + hy, 1.0});
  phi.sup_norm = std::abs(amp);
  phi.grad_sup_norm =
      std::abs(amp) * kBumpSlopeMax * std::hypot(1.0 / hx, 1.0 / hy);
  phi.name = "box(cx=" + std::to_string(cx) + ",cy=" + std::to_string(cy) +
             ",hx=" + std::to_string(hx) + ",hy=" + std::to_string(hy) +
             ",amp=" + std::to_string(amp) + ")";
  return phi;
}

TestFunction2D diagonal_bump(double offset, double hx, double hd, double amp) {
  if (!(hx > 0.0) || !(hd > 0.0)) throw InvalidSpec("bump half-widths must be positive");
  TestFunction2D phi;
  phi.value = [=](double x, double y) {
    return amp * bump(x / hx) * bump((y - x - offset) / hd);
  };
  phi.gradient = [=](double x, double y) {
    const double b1 = bump(x / hx), b2 = bump((y - x - offset) / hd);
    const double db1 = bump_prime(x / hx) / hx;
    const double db2 = bump_prime((y - x - offset) / hd) / hd;
    return Vec2{amp * (db1 * b2 - b1 * db2), amp * b1 * db2};
  };
  phi.half_width = std::max({hx, hx + std::abs(offset) + hd, 1.0});
  phi.sup_norm = std::abs(amp);
  phi.grad_sup_norm = std::abs(amp) * kBumpSlopeMax *
                      (1.0 / hx + 2.0 / hd);  // coarse upper bound
  phi.name = "diag(offset=" + std::to_string(offset) + ",hx=" + std::to_string(hx) +
             ",hd=" + std::to_string(hd) + ",amp=" + std::to_string(amp) + ")";
  return phi;
}

TestFunction2D scaled(const TestFunction2D& phi, double factor) {
  TestFunction2D out = phi;
  auto value = phi.value;
  auto gradient = phi.gradient;
  out.value = [=](double x, double y) { return factor * value(x, y); };
  out.gradient = [=](double x, double y) {
    Vec2 g = gradient(x, y);
    return Vec2{factor * g.x, factor * g.y};
  };
  out.sup_norm = std::abs(factor) * phi.sup_norm;
  out.grad_sup_norm = std::abs(factor) * phi.grad_sup_norm;
  out.name = phi.name + "*" + std::to_string(factor);
  return out;
}

namespace {

// Catmull-Rom kernel pieces: value and derivative of the 1D interpolant
// through 4 consecutive samples at local coordinate t in [0,1].
double cr_interp(double p0, double p1, double p2, double p3, double t) {
  const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
  const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
  const double c = -0.5 * p0 + 0.5 * p2;
  return ((a * t + b) * t + c) * t + p1;
}

double cr_interp_prime(double p0, double p1, double p2, double p3, double t) {
  const double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
  const double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
  const double c = -0.5 * p0 + 0.5 * p2;
  return (3.0 * a * t + 2.0 * b) * t + c;
}

struct Grid {
  std::vector<double> v;
  int nx, ny;
  double t;  // half-width

  double at(int i, int j) const {  // zero padding outside
    if (i < 0 || j < 0 || i >= nx || j >= ny) return 0.0;
    return v[static_cast<std::size_t>(j) * nx + i];
  }
};

}  // namespace

TestFunction2D grid_test_function(std::vector<double> values, int nx, int ny,
                                  double half_width, std::string name) {
  if (nx < 4 || ny < 4) throw InvalidSpec("grid must be at least 4x4");
  if (values.size() != static_cast<std::size_t>(nx) * ny)
    throw InvalidSpec("grid value count does not match nx * ny");
  if (!(half_width >= 1.0)) throw InvalidSpec("support half-width must be >= 1");
  auto grid = std::make_shared<Grid>(Grid{std::move(values), nx, ny, half_width});

  const double hx = 2.0 * half_width / (nx - 1);
  const double hy = 2.0 * half_width / (ny - 1);

  auto locate = [](double u, double t, double h, int n, int* idx, double* frac) {
    const double s = (u + t) / h;
    int i = static_cast<int>(std::floor(s));
    if (i < -1 || i > n - 1) return false;
    *idx = i;
    *frac = s - i;
    return true;
  };

  double vmax = 0.0;
  for (double x : grid->v) vmax = std::max(vmax, std::abs(x));

  TestFunction2D phi;
  phi.half_width = half_width;
  phi.sup_norm = 1.25 * vmax + 1e-300;  // Catmull-Rom overshoot margin
  phi.grad_sup_norm = 2.0 * vmax / std::min(hx, hy) + 1e-300;
  phi.name = std::move(name);
  phi.value = [grid, hx, hy, locate](double x, double y) {
    int i, j;
    double tx, ty;
    if (!locate(x, grid->t, hx, grid->nx, &i, &tx)) return 0.0;
    if (!locate(y, grid->t, hy, grid->ny, &j, &ty)) return 0.0;
    double col[4];
    for (int d = 0; d < 4; ++d)
      col[d] = cr_interp(grid->at(i - 1, j - 1 + d), grid->at(i, j - 1 + d),
                         grid->at(i + 1, j - 1 + d), grid->at(i + 2, j - 1 + d), tx);
    return cr_interp(col[0], col[1], col[2], col[3], ty);
  };
  phi.gradient = [grid, hx, hy, locate](double x, double y) {
    int i, j;
    double tx, ty;
    if (!locate(x, grid->t, hx, grid->nx, &i, &tx)) return Vec2{};
    if (!locate(y, grid->t, hy, grid->ny, &j, &ty)) return Vec2{};
    double col[4], dcol[4];
    for (int d = 0; d < 4; ++d) {
      const double p0 = grid->at(i - 1, j - 1 + d), p1 = grid->at(i, j - 1 + d),
                   p2 = grid->at(i + 1, j - 1 + d), p3 = grid->at(i + 2, j - 1 + d);
      col[d] = cr_interp(p0, p1, p2, p3, tx);
      dcol[d] = cr_interp_prime(p0, p1, p2, p3, tx);
    }
    return Vec2{cr_interp(dcol[0], dcol[1], dcol[2], dcol[3], ty) / hx,
                cr_interp_prime(col[0], col[1], col[2], col[3], ty) / hy};
  };
  return phi;
}

TestFunctionValidation validate_test_function(const TestFunction2D& phi, int grid_n,
                                              double fd_step) {
  TestFunctionValidation out;
  const double t = phi.half_width;
  // outside ring
  for (int k = 0; k <= 64; ++k) {
    const double u = -t * 1.5 + 3.0 * t * k / 64.0;
    for (double margin : {1.0001, 1.05, 1.5}) {
      out.max_outside = std::max({out.max_outside, std::abs(phi.value(u, t * margin)),
                                  std::abs(phi.value(u, -t * margin)),
                                  std::abs(phi.value(t * margin, u)),
                                  std::abs(phi.value(-t * margin, u))});
    }
  }
  // interior grid: norms and C^1 check
  for (int i = 0; i < grid_n; ++i) {
    const double x = -t + 2.0 * t * (i + 0.5) / grid_n;
    for (int j = 0; j < grid_n; ++j) {
      const double y = -t + 2.0 * t * (j + 0.5) / grid_n;
      const double v = phi.value(x, y);
      const Vec2 g = phi.gradient(x, y);
      out.max_value = std::max(out.max_value, std::abs(v));
      out.max_gradient = std::max(out.max_gradient, g.norm());
      if ((i * 7 + j * 13) % 97 == 0) {  // FD spot checks on a subsample
        const double gx_fd =
            (phi.value(x + fd_step, y) - phi.value(x - fd_step, y)) / (2.0 * fd_step);
        const double gy_fd =
            (phi.value(x, y + fd_step) - phi.value(x, y - fd_step)) / (2.0 * fd_step);
        out.max_gradient_mismatch =
            std::max({out.max_gradient_mismatch, std::abs(gx_fd - g.x),
                      std::abs(gy_fd - g.y)});
      }
    }
  }
  out.sup_norm_ok = out.max_value <= phi.sup_norm * (1.0 + 1e-12);
  out.grad_sup_norm_ok = out.max_gradient <= phi.grad_sup_norm * (1.0 + 1e-12);
  return out;
}

}  // namespace loggas
