#pragma once

#include <cmath>

#include "isocone/generating_function.hpp"

namespace fixtures {

// Smoothed hinge: flat near the axis, bending to slope `a` around x0 over
// width eps,
//   f(x) = (a/2)[(x - x0) + sqrt((x - x0)^2 + eps^2)] - f(0-part)
// shifted so f(0) = 0. For x0 >> eps the apex-height derivative g' dips
// negative near the bend, so the foliation threshold is genuinely
// interior, unlike the everywhere-foliated hyperbolic family.
inline isocone::GeneratingFunction make_smoothed_hinge(double a, double x0,
                                                       double eps) {
  const double shift = 0.5 * a * (-x0 + std::hypot(x0, eps));
  isocone::GeneratingFunction f;
  f.eval = [a, x0, eps, shift](double x) {
    const double u = x - x0;
    return 0.5 * a * (u + std::hypot(u, eps)) - shift;
  };
  f.deriv = [a, x0, eps](double x) {
    const double u = x - x0;
    return 0.5 * a * (1.0 + u / std::hypot(u, eps));
  };
  f.deriv2 = [a, x0, eps](double x) {
    const double u = x - x0;
    const double h = std::hypot(u, eps);
    return 0.5 * a * eps * eps / (h * h * h);
  };
  f.family = "custom";
  return f;
}

// Half-space profile f = 0: every cap is a hemisphere centered on the wall.
inline isocone::GeneratingFunction make_flat() {
  isocone::GeneratingFunction f;
  f.eval = [](double) { return 0.0; };
  f.deriv = [](double) { return 0.0; };
  f.deriv2 = [](double) { return 0.0; };
  f.family = "custom";
  return f;
}

}  // namespace fixtures
