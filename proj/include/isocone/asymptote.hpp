#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/generating_function.hpp"
#include "isocone/numerics.hpp"

namespace isocone {

namespace detail {
// Tolerances for asymptote detection. The slope-growth cutoff classifies a
// profile whose derivative is still climbing at the top of the probe ladder
// as having no affine asymptote.
inline constexpr double kSlopeGrowthTol = 1e-6;
inline constexpr double kLadderBase = 1.0;
inline constexpr int kLadderRungs = 40;
}  // namespace detail

// Affine asymptote y = slope * x + intercept of the generating function.
// residual is |f(X) - (slope X + intercept)| measured at the largest probe.
struct AsymptoteData {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
};

// Detects the asymptote on the geometric probe ladder x_k = 2^k, clipped to
// the profile's domain hint. The slope comes from the derivative ladder
// accelerated by iterated Aitken extrapolation (Richardson-style on a
// geometric grid); the intercept from the ladder of f(x_k) - slope x_k,
// truncated where floating-point cancellation floors the increments.
inline AsymptoteData detect_asymptote(const GeneratingFunction& f,
                                      double tol = 1e-8) {
  std::vector<double> xs;
  for (int k = 0; k < detail::kLadderRungs; ++k) {
    const double x = detail::kLadderBase * std::ldexp(1.0, k);
    if (x > f.domain_hint) break;
    xs.push_back(x);
  }
  if (xs.size() < 4)
    throw ConfigError("detect_asymptote: domain hint leaves too few probes");

  std::vector<double> slopes(xs.size());
  for (std::size_t k = 0; k < xs.size(); ++k) {
    slopes[k] = f.deriv(xs[k]);
    if (!std::isfinite(slopes[k]))
      throw NoAsymptoteError("derivative not finite at probe");
  }
  const std::size_t last = xs.size() - 1;
  if (slopes[last] - slopes[last - 1] > detail::kSlopeGrowthTol)
    throw NoAsymptoteError(
        "slope still increasing at the top of the probe ladder: no affine "
        "asymptote at the requested tolerance");

  const double a = accelerate_limit(slopes);
  if (!(a > tol))
    throw DegenerateSlopeError(
        "asymptote slope is zero at tolerance: half-space-like input");

  // Intercept ladder b_k = f(x_k) - a x_k. Increments grow while the probes
  // are still below the profile's own bending scale, then decay like 1/x;
  // cancellation noise grows like eps * a * x. Stop at the roundoff floor,
  // or when a decaying ladder turns erratic (noise before the floor model
  // predicts it). The erratic guard stays unarmed during the initial growth.
  std::vector<double> bs;
  bs.reserve(xs.size());
  double prev_step = std::numeric_limits<double>::infinity();
  bool decaying = false;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double fx = f.eval(xs[k]);
    if (!std::isfinite(fx)) throw NoAsymptoteError("f not finite at probe");
    const double bk = fx - a * xs[k];
    if (k >= 1) {
      const double step = std::abs(bk - bs.back());
      const double floor_k = 8.0 * kEps * (std::abs(fx) + std::abs(a) * xs[k]);
      if (step <= floor_k || (decaying && step > prev_step * 1.5)) {
        bs.push_back(bk);
        break;
      }
      if (k >= 2 && step < prev_step) decaying = true;
      prev_step = step;
    }
    bs.push_back(bk);
  }
  const double b = accelerate_limit(bs);

  // Residual check at the top ladder probe. Beyond the analytic tolerance we
  // allow the unavoidable ulp noise of evaluating f at a huge argument.
  const double X = xs.back();
  const double fX = f.eval(X);
  const double residual = std::abs(fX - (a * X + b));
  const double allowance =
      tol * (1.0 + std::abs(b)) + 16.0 * kEps * (std::abs(fX) + a * X);
  if (residual > allowance)
    throw NoAsymptoteError("affine fit residual exceeds tolerance");
  return {a, b, residual};
}

// Asymptotic cone of a body of revolution: slope a, vertex on the axis at
// height vertex_height (the asymptote intercept, <= 0 for these bodies).
struct ConeOfRevolution {
  int n = 1;
  double slope = 0;
  double vertex_height = 0;

  // Radius of the horizontal slice {y = t} of the cone.
  double slice_radius(double t) const {
    if (t < vertex_height)
      throw ConfigError("cone slice below the vertex");
    return (t - vertex_height) / slope;
  }
};

// Builds the asymptotic cone and cross-checks it against the dilation
// characterization: f(mu x) / mu is non-decreasing in mu and converges to
// slope * x + intercept / mu.
inline ConeOfRevolution asymptotic_cone(const BodyOfRevolution& body,
                                        double tol = 1e-8) {
  const AsymptoteData ad = detect_asymptote(body.profile, tol);
  const auto& f = body.profile;
  for (double x : {0.5, 1.0, 2.0, 5.0}) {
    double prev = -std::numeric_limits<double>::infinity();
    double mu = 1.0;
    double top = 0.0, top_mu = 1.0;
    while (mu * x <= f.domain_hint && mu <= std::ldexp(1.0, 24)) {
      const double v = f.eval(mu * x) / mu;
      if (v < prev - 1e-12 * (1.0 + std::abs(v)))
        throw NoAsymptoteError("dilation ladder not monotone");
      prev = v;
      top = v;
      top_mu = mu;
      mu *= 2.0;
    }
    const double expected = ad.slope * x + ad.intercept / top_mu;
    if (std::abs(top - expected) >
        1e-8 * (1.0 + ad.slope * x) + 8.0 * std::abs(ad.intercept) / top_mu)
      throw NoAsymptoteError("dilation ladder does not converge to the cone");
  }
  return {body.n, ad.slope, ad.intercept};
}

// Radius of the body's horizontal slice: f^{-1}(t), by monotone bisection.
inline double radial_slice(const BodyOfRevolution& body, double t) {
  if (t < 0) throw ConfigError("radial_slice: negative height");
  if (t == 0) return 0.0;
  const auto& f = body.profile;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (f.eval(hi) < t) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2100) throw Error("radial_slice: no upper bracket");
  }
  return bisect_root([&f, t](double x) { return f.eval(x) - t; }, lo, hi,
                     1e-13);
}

// |body slice radius - cone slice radius| at each height. For a conically
// bounded body the gaps must decay monotonically and fall below decay_tol
// at the largest height.
inline std::vector<double> conical_boundedness_gap(
    const BodyOfRevolution& body, const ConeOfRevolution& cone,
    const std::vector<double>& heights, double decay_tol = 1e-3) {
  if (heights.size() < 2)
    throw ConfigError("conical_boundedness_gap: need at least two heights");
  for (std::size_t i = 1; i < heights.size(); ++i)
    if (heights[i] <= heights[i - 1] || heights[i - 1] <= 0)
      throw ConfigError("conical_boundedness_gap: heights must be positive "
                        "and increasing");
  std::vector<double> gaps;
  gaps.reserve(heights.size());
  for (double t : heights)
    gaps.push_back(std::abs(radial_slice(body, t) - cone.slice_radius(t)));
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] > gaps[i - 1] + 1e-9 * (1.0 + gaps[i - 1]))
      throw NotConicallyBoundedError("slice gap fails to decay");
  if (gaps.back() > decay_tol)
    throw NotConicallyBoundedError(
        "slice gap above tolerance at the largest height");
  return gaps;
}

}  // namespace isocone
