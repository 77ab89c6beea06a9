#pragma once

#include <cmath>
#include <string>

#include "isocone/errors.hpp"
#include "isocone/numerics.hpp"

namespace isocone {

// Closed-form isoperimetric profiles of the two reference domains. In both,
// the minimizer at volume v is a ball sector about the distinguished point
// (cone vertex / any boundary point of the half-space), so
//   I(v) = sigma^{1/(n+1)} ((n+1) v)^{n/(n+1)},
// where sigma is the solid measure of the sector of directions: for the
// cone of slope a, sigma = n w_n S_{n-1}(atan(1/a)); for the half-space,
// sigma = (n+1) w_{n+1} / 2 (half of the unit n-sphere measure).
enum class ReferenceKind { cone, halfspace };

struct ReferenceProfile {
  ReferenceKind kind = ReferenceKind::halfspace;
  int n = 1;
  double slope = 0;          // cone only
  double sector_measure = 0; // sigma above
  double unit_value = 0;     // I(1)

  double perimeter(double v) const {
    if (v <= 0) throw ConfigError("reference perimeter needs v > 0");
    const double p = static_cast<double>(n) / (n + 1);
    return std::pow(sector_measure, 1.0 / (n + 1)) *
           std::pow((n + 1) * v, p);
  }

  // Radius of the sector realizing volume v.
  double sector_radius(double v) const {
    return std::pow((n + 1) * v / sector_measure, 1.0 / (n + 1));
  }
};

inline double cone_sector_measure(double slope, int n) {
  if (slope <= 0) throw ConfigError("cone sector needs slope > 0");
  const double psi = std::atan2(1.0, slope);  // half-angle from the axis
  return unit_sphere_area(n) * sin_power_integral(n - 1, psi);
}

inline ReferenceProfile make_cone_profile(double slope, int n) {
  ReferenceProfile r;
  r.kind = ReferenceKind::cone;
  r.n = n;
  r.slope = slope;
  r.sector_measure = cone_sector_measure(slope, n);
  r.unit_value = r.perimeter(1.0);
  return r;
}

inline ReferenceProfile make_halfspace_profile(int n) {
  ReferenceProfile r;
  r.kind = ReferenceKind::halfspace;
  r.n = n;
  r.sector_measure = 0.5 * (n + 1) * unit_ball_volume(n + 1);
  r.unit_value = r.perimeter(1.0);
  return r;
}

}  // namespace isocone
