#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/generating_function.hpp"
#include "isocone/numerics.hpp"
#include "isocone/ode.hpp"
#include "isocone/quadrature.hpp"

namespace isocone {

// Constant-mean-curvature shot: the profile curve of a CMC surface of
// revolution launched on the axis at height t0 and integrated outward and
// downward until it hits the graph of f. theta is the depression angle of
// the tangent (the curve descends while theta is in (0, pi)):
//   dx/ds = cos(theta), dt/ds = -sin(theta),
//   dtheta/ds = n H - (n-1) sin(theta) / x,
// with the axis limit theta'(0) = H. H is the averaged mean curvature of
// the generated surface with respect to the normal pointing into the
// enclosed region; the sphere of radius rho solves the system with
// H = 1/rho, x = rho sin(H s), t = t0 - rho (1 - cos(H s)).
//
// Two auxiliary states ride along: the sliced volume between the path and
// the hit height, V(s) = w_n int x^n sin(theta) ds, and the area of the
// surface of revolution swept by the path, A(s) = n w_n int x^{n-1} ds.
struct PathPoint {
  double s = 0, x = 0, t = 0, theta = 0;
};

struct CmcShot {
  double start_height = 0;
  double mean_curvature = 0;
  std::vector<PathPoint> path;
  bool hit = false;
  double hit_station = 0;        // x at the hit
  double hit_height = 0;         // t at the hit (= f(x) up to tolerance)
  double hit_theta = 0;
  double boundary_angle_defect = 0;  // deviation from an orthogonal meeting
  double enclosed_volume = 0;    // between the path surface and the body wall
  double perimeter = 0;          // area of the path surface of revolution
};

struct ShotOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  bool store_path = false;
};

namespace detail {

// Signed deviation from orthogonality where the path meets the graph:
// asin of the inner product of the two unit tangents. Zero iff the
// surfaces meet at a right angle.
inline double angle_defect(double theta, double fprime) {
  const double dot =
      (std::cos(theta) - fprime * std::sin(theta)) / std::hypot(1.0, fprime);
  return std::asin(std::min(1.0, std::max(-1.0, dot)));
}

}  // namespace detail

// Integrates one shot. Throws NoHitError when the path closes onto the
// axis (or traverses a full half-period) without meeting the graph.
inline CmcShot integrate_shot(const BodyOfRevolution& body, double t0,
                              double H, const ShotOptions& opt = {}) {
  if (!(t0 > 0)) throw ConfigError("integrate_shot: t0 must be positive");
  if (!(H > 0)) throw ConfigError("integrate_shot: H must be positive");
  const auto& f = body.profile;
  const int n = body.n;
  const double wn = unit_ball_volume(n);
  const double rho = 1.0 / H;

  // Series launch past the axis singularity. Three terms of the regular
  // solution; x ~ s and theta ~ H s remove the sin(theta)/x indeterminacy.
  double s1 = 1e-4 * rho;
  auto series = [&](double s, std::array<double, 5>& y) {
    const double hs = H * s;
    y[0] = s * (1.0 - hs * hs / 6.0);
    y[1] = t0 - 0.5 * H * s * s * (1.0 - hs * hs / 12.0);
    y[2] = hs;
    y[3] = wn * H * std::pow(s, n + 2) / (n + 2);
    y[4] = wn * std::pow(s, n);
  };
  std::array<double, 5> y0;
  series(s1, y0);
  int halvings = 0;
  while (y0[1] - f.eval(y0[0]) <= 0) {
    s1 *= 0.5;
    series(s1, y0);
    if (++halvings > 200)
      throw NoHitError("integrate_shot: start height touches the wall");
  }

  auto deriv = [n, H, wn](double, const std::array<double, 5>& y,
                          std::array<double, 5>& dy) {
    const double st = std::sin(y[2]);
    dy[0] = std::cos(y[2]);
    dy[1] = -st;
    dy[2] = n * H - (n - 1) * st / y[0];
    dy[3] = wn * std::pow(y[0], n) * st;
    dy[4] = n * wn * std::pow(y[0], n - 1);
  };
  OdeOptions<5> oopt;
  oopt.abs_tol = opt.abs_tol;
  oopt.rel_tol = opt.rel_tol;
  oopt.store_path = opt.store_path;
  const double s_end = (M_PI + 0.1) * rho;
  OdeEvent<5> event = [&f](double, const std::array<double, 5>& y) {
    return y[1] - f.eval(y[0]);
  };
  OdeGuard<5> guard = [rho](double, const std::array<double, 5>& y) {
    return y[0] < 1e-9 * rho && y[2] > 1.0;  // closing onto the axis
  };
  OdeResult<5> r = integrate_ode(deriv, y0, s1, s_end, oopt, event, guard);
  if (r.status != OdeStop::event)
    throw NoHitError("integrate_shot: path closes onto the axis without "
                     "meeting the wall");

  CmcShot shot;
  shot.start_height = t0;
  shot.mean_curvature = H;
  shot.hit = true;
  shot.hit_station = r.y[0];
  shot.hit_height = r.y[1];
  shot.hit_theta = r.y[2];
  shot.boundary_angle_defect =
      detail::angle_defect(r.y[2], f.deriv(r.y[0]));
  // region below the hit height is bounded by the body wall alone
  const double body_part = integrate(
      [&f, n](double u) { return std::pow(u, n) * f.deriv(u); }, 0.0,
      shot.hit_station, 1e-11);
  shot.enclosed_volume = wn * body_part + r.y[3];
  shot.perimeter = r.y[4];
  if (opt.store_path) {
    shot.path.reserve(r.path.size());
    for (const auto& [s, y] : r.path)
      shot.path.push_back({s, y[0], y[1], y[2]});
  }
  return shot;
}

}  // namespace isocone
