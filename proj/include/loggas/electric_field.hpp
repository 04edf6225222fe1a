#pragma once

#include <cmath>
#include <vector>

#include "loggas/torus_config.hpp"

namespace loggas {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  double norm() const { return std::hypot(x, y); }
};

// Electric field of the periodic configuration, E = -grad H with the
// logarithmic potential
//   H(z) = sum_i -log|2 sin(pi (z - a_i) / N)| + pi |y|,
// so that div E = 2 pi (sum_i delta_{a_i} - delta_R) (positive flux out of a
// positive charge) and E decays exponentially away from the real line. On
// the charge line itself the background term uses sign(0) = 0 (principal
// value). Throws AtCharge within 1e-14 * N of a charge.
Vec2 field_at(const TorusConfiguration& config, double x, double y);

// Quadrature plan for the definition-based energy. The plane is split into
// polar caps around each charge (log-spaced radial panels), thin rectangles
// along the charge line, and a tensor grid above, all integrated with
// Gauss-Legendre panels; one exact period window replaces the R -> infinity
// cutoff family (the field is periodic).
struct QuadratureSpec {
  std::vector<double> eta_levels;  // descending ball-excision radii
  double y_max = 0.0;              // vertical truncation, >= period
  double tol = 1e-3;               // disagreement tolerance between eta levels
  int gl_order = 12;
  int theta_subdivisions = 2;      // per smooth theta range of a cap
  int radial_panels_per_octave = 1;
  int bottom_y_panels = 2;

  // eta levels {g/8, g/16, g/32} with g the minimal gap, y_max = 2N.
  static QuadratureSpec defaults_for(const TorusConfiguration& config);
};

struct ViaDefinitionResult {
  double value = 0.0;               // eta -> 0 extrapolated energy
  std::vector<double> eta;          // levels used
  std::vector<double> bracket;      // (1/N)[ integral + pi N log eta ] per level
  double c1 = 0.0;                  // fitted linear-in-eta slope of the bracket
  double fit_residual = 0.0;        // max deviation from the linear fit
  double error_estimate = 0.0;      // spread of the two finest extrapolants
};

// Energy via the regularized-integral definition, Richardson-extrapolated in
// eta. An independent oracle for energy_periodic. Throws MeshTooCoarse when
// the two finest eta extrapolants disagree by more than spec.tol, and
// InvalidSpec for inconsistent plans (eta >= min_gap / 2, y_max < N, ...).
ViaDefinitionResult energy_via_definition(const TorusConfiguration& config,
                                          const QuadratureSpec& spec);

// Outward flux of E through the circle of given radius around charge
// `charge_index`. Equals 2 pi (1 - 2 r) when the circle encloses no other
// charge (divergence theorem: one unit charge minus a diameter of background).
double flux_around_charge(const TorusConfiguration& config, int charge_index,
                          double radius, int panels_per_half = 8, int gl_order = 16);

// Counterclockwise circulation of E around an axis-aligned rectangle that
// avoids all charges; vanishes because E is a gradient.
double circulation_rectangle(const TorusConfiguration& config, double x0, double y0,
                             double x1, double y1, int panels_per_edge = 8,
                             int gl_order = 16);

}  // namespace loggas
