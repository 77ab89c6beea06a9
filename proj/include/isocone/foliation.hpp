#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/generating_function.hpp"
#include "isocone/numerics.hpp"
#include "isocone/quadrature.hpp"

namespace isocone {

// Spherical cap leaf attached at station x > 0: the sphere through
// (x, f(x)) centered on the axis at height c(x) = f(x) - x f'(x), radius
// r(x) = x sqrt(1 + f'(x)^2). The center sits on the tangent line of the
// graph at the attachment point, so the sphere meets the boundary of the
// body orthogonally there.
struct FoliationCap {
  double station = 0;         // attachment abscissa x
  double center_height = 0;   // c(x)
  double radius = 0;          // r(x)
  double mean_curvature = 0;  // 1 / r(x)
  double enclosed_volume = 0;
  double cap_perimeter = 0;
};

struct FoliationChart {
  double threshold = 0;  // x_m
  std::vector<FoliationCap> caps;
};

namespace detail {
// Center/radius only; cheap enough for ladder scans and root finding.
inline void cap_geometry(const BodyOfRevolution& body, double x, double& c,
                         double& r) {
  const double fx = body.profile.eval(x);
  const double d = body.profile.deriv(x);
  c = fx - x * d;
  r = x * std::hypot(1.0, d);
}
}  // namespace detail

// d/dx of the apex height g(x) = c(x) + r(x). Positive slope means the cap
// apexes slide upward, i.e. the leaves foliate.
inline double foliation_gprime(const BodyOfRevolution& body, double x) {
  const double d = body.profile.deriv(x);
  const double d2 = body.profile.deriv2(x);
  const double root = std::hypot(1.0, d);
  return x * d2 * (-1.0 + d / root) + root;
}

// Enclosed volume and cap area of a leaf. Slices below the attachment
// height are bounded by the body, slices above by the sphere; the two
// pieces are integrated separately (the integrand has a kink at the joint).
// Changes of variable t = f(u) and t = c + r cos(phi) make both pieces
// smooth before the adaptive quadrature sees them.
inline void cap_measures(const BodyOfRevolution& body, FoliationCap& cap,
                         double rel_tol = 1e-11) {
  const auto& f = body.profile;
  const double x = cap.station;
  const double fx = f.eval(x);
  const double c = cap.center_height;
  const double r = cap.radius;
  if (!(c + r > fx) || !(r > 0))
    throw DegenerateCapError("cap apex not above the attachment point");
  const int n = body.n;
  const double wn = unit_ball_volume(n);
  const double theta = std::atan2(x, fx - c);

  const double body_part = integrate(
      [&f, n](double u) { return std::pow(u, n) * f.deriv(u); }, 0.0, x,
      rel_tol);
  const double sphere_part =
      std::pow(r, n + 1) *
      integrate([n](double p) { return std::pow(std::sin(p), n + 1); }, 0.0,
                theta, rel_tol);
  cap.enclosed_volume = wn * (body_part + sphere_part);
  cap.cap_perimeter =
      n * wn * std::pow(r, n) *
      integrate([n](double p) { return std::pow(std::sin(p), n - 1); }, 0.0,
                theta, rel_tol);
}

// Leaf at station x with measures attached.
inline FoliationCap cap_at(const BodyOfRevolution& body, double x) {
  if (!(x > 0)) throw ConfigError("cap_at: station must be positive");
  FoliationCap cap;
  cap.station = x;
  detail::cap_geometry(body, x, cap.center_height, cap.radius);
  if (!(cap.radius > 0)) throw DegenerateCapError("cap radius not positive");
  cap.mean_curvature = 1.0 / cap.radius;
  cap_measures(body, cap);
  return cap;
}

namespace detail {
inline constexpr double kThresholdLadderBase = 1e-2;
inline constexpr double kThresholdLadderRatio = 1.0905077326652577;  // 2^(1/8)
}  // namespace detail

// Smallest station beyond which g' stays positive on the probe ladder. The
// ladder is geometric with ratio 2^(1/8) from 1e-2 up to the domain hint;
// the sign change (if any) is sharpened by bisection. If g' > 0 already at
// the first probe the threshold defaults to that probe.
inline double foliation_threshold(const BodyOfRevolution& body) {
  std::vector<double> xs;
  const double top = std::min(body.profile.domain_hint, 1e10);
  for (double x = detail::kThresholdLadderBase; x <= top;
       x *= detail::kThresholdLadderRatio)
    xs.push_back(x);
  if (xs.size() < 2)
    throw ConfigError("foliation_threshold: domain hint leaves no ladder");
  std::optional<std::size_t> last_nonpos;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (foliation_gprime(body, xs[i]) <= 0) last_nonpos = i;
  if (!last_nonpos) return xs.front();
  if (*last_nonpos + 1 >= xs.size())
    throw ThresholdNotFoundError(
        "g' still nonpositive at the top of the probe ladder");
  const double lo = xs[*last_nonpos];
  const double hi = xs[*last_nonpos + 1];
  return bisect_root(
      [&body](double x) { return foliation_gprime(body, x); }, lo, hi,
      1e-10 * std::max(1.0, hi));
}

// Leaves at the given stations (all at or beyond the threshold).
inline FoliationChart sample_chart(const BodyOfRevolution& body,
                                   const std::vector<double>& stations) {
  FoliationChart chart;
  chart.threshold = foliation_threshold(body);
  for (double x : stations) {
    if (x < chart.threshold * (1.0 - 1e-12))
      throw ConfigError("sample_chart: station below the threshold");
    chart.caps.push_back(cap_at(body, x));
  }
  return chart;
}

// Inverts the (strictly increasing) volume map of the foliation: the leaf
// whose enclosed volume is v, to 1e-9 relative.
inline FoliationCap cap_for_volume(const BodyOfRevolution& body, double v,
                                   std::optional<double> threshold = {}) {
  if (!(v > 0)) throw ConfigError("cap_for_volume: volume must be positive");
  const double xm = threshold ? *threshold : foliation_threshold(body);
  FoliationCap bottom = cap_at(body, xm);
  if (v < bottom.enclosed_volume * (1.0 - 1e-12))
    throw VolumeTooSmallError(
        "requested volume below the first foliation leaf");
  if (std::abs(bottom.enclosed_volume - v) <= 1e-9 * v) return bottom;
  double lo = xm, hi = xm;
  double vol_hi = bottom.enclosed_volume;
  int guard = 0;
  while (vol_hi < v) {
    lo = hi;
    hi *= 2.0;
    vol_hi = cap_at(body, hi).enclosed_volume;
    if (++guard > 200)
      throw Error("cap_for_volume: volume bracket did not close");
  }
  const double x = brent_root(
      [&body, v](double s) { return cap_at(body, s).enclosed_volume - v; },
      lo, hi, 1e-13 * hi);
  FoliationCap cap = cap_at(body, x);
  if (std::abs(cap.enclosed_volume - v) > 1e-9 * v)
    throw Error("cap_for_volume: volume match outside tolerance");
  return cap;
}

}  // namespace isocone
