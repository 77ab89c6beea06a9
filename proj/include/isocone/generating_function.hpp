#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "isocone/errors.hpp"

namespace isocone {

// Smooth convex profile f: [0, inf) -> [0, inf) with f(0) = 0, f'(0) = 0.
// The epigraph of f(|x|) rotated about the vertical axis is the unbounded
// convex body the rest of the library works on. Derivatives are supplied
// analytically by each family; nothing here differentiates numerically.
struct GeneratingFunction {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
  double domain_hint = 1e12;  // largest x the probes may touch
  // The synthetic cone family has f'(0) = a != 0; checks at the origin are
  // relaxed for it (and for deliberately malformed test inputs).
  bool relax_origin = false;
  std::string family = "custom";
};

// Body of revolution in R^{n+1}: C = {(x, y) in R^n x R : y >= f(|x|)}.
struct BodyOfRevolution {
  int n = 1;  // dimension of the rotating factor; ambient space is R^{n+1}
  GeneratingFunction profile;
};

// f(x) = sqrt(a^2 x^2 + s^2) - s. Asymptote a x - s, approached like 1/x.
inline GeneratingFunction make_hyperbolic(double a, double s) {
  if (a <= 0 || s <= 0)
    throw ConfigError("hyperbolic family needs a > 0 and s > 0");
  GeneratingFunction g;
  g.eval = [a, s](double x) { return std::hypot(a * x, s) - s; };
  g.deriv = [a, s](double x) { return a * a * x / std::hypot(a * x, s); };
  g.deriv2 = [a, s](double x) {
    const double h = std::hypot(a * x, s);
    return a * a * s * s / (h * h * h);
  };
  g.domain_hint = 1e12;
  g.family = "hyperbolic";
  return g;
}

// f(x) = a (x + c e^{-x/c} - c). Asymptote a x - a c, approached
// exponentially fast.
inline GeneratingFunction make_exp_cap(double a, double c) {
  if (a <= 0 || c <= 0)
    throw ConfigError("exp-cap family needs a > 0 and c > 0");
  GeneratingFunction g;
  g.eval = [a, c](double x) { return a * (x + c * std::exp(-x / c) - c); };
  g.deriv = [a, c](double x) { return a * (1.0 - std::exp(-x / c)); };
  g.deriv2 = [a, c](double x) { return (a / c) * std::exp(-x / c); };
  g.domain_hint = 1e12;
  g.family = "exp-cap";
  return g;
}

// f(x) = a x: the cone itself. f'(0) = a, so origin checks are relaxed.
inline GeneratingFunction make_cone(double a) {
  if (a <= 0) throw ConfigError("cone family needs a > 0");
  GeneratingFunction g;
  g.eval = [a](double x) { return a * x; };
  g.deriv = [a](double) { return a; };
  g.deriv2 = [](double) { return 0.0; };
  g.domain_hint = 1e12;
  g.relax_origin = true;
  g.family = "cone";
  return g;
}

// f(x) = e^x - 1: convex, unbounded slope, no affine asymptote. Registry
// counterexample used to exercise the rejection paths.
inline GeneratingFunction make_exp_counterexample() {
  GeneratingFunction g;
  g.eval = [](double x) { return std::expm1(x); };
  g.deriv = [](double x) { return std::exp(x); };
  g.deriv2 = [](double x) { return std::exp(x); };
  g.domain_hint = 300.0;  // e^x stays finite well past every probe in use
  g.relax_origin = true;  // f'(0) = 1 by design
  g.family = "exp";
  return g;
}

// Profile of the dilated body lambda*C: f_lambda(x) = lambda f(x / lambda).
inline GeneratingFunction scale_profile(const GeneratingFunction& f,
                                        double lambda) {
  if (lambda <= 0) throw ConfigError("scale_profile needs lambda > 0");
  GeneratingFunction g;
  g.eval = [f = f.eval, lambda](double x) { return lambda * f(x / lambda); };
  g.deriv = [d = f.deriv, lambda](double x) { return d(x / lambda); };
  g.deriv2 = [d2 = f.deriv2, lambda](double x) {
    return d2(x / lambda) / lambda;
  };
  g.domain_hint = f.domain_hint * lambda;
  g.relax_origin = f.relax_origin;
  g.family = f.family + "-scaled";
  return g;
}

inline BodyOfRevolution scale_body(const BodyOfRevolution& body,
                                   double lambda) {
  return {body.n, scale_profile(body.profile, lambda)};
}

}  // namespace isocone
