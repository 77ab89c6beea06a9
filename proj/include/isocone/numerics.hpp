#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "isocone/errors.hpp"

namespace isocone {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Volume of the unit ball in R^n, by the two-step recurrence
// w_0 = 1, w_1 = 2, w_n = w_{n-2} * 2*pi/n.
inline double unit_ball_volume(int n) {
  if (n < 0) throw ConfigError("unit_ball_volume: negative dimension");
  if (n == 0) return 1.0;
  if (n == 1) return 2.0;
  return unit_ball_volume(n - 2) * 2.0 * M_PI / static_cast<double>(n);
}

// Surface measure of the unit (n-1)-sphere in R^n: n * w_n.
inline double unit_sphere_area(int n) {
  return static_cast<double>(n) * unit_ball_volume(n);
}

// S_m(theta) = integral_0^theta sin^m(phi) dphi, by the stable downward
// recurrence S_m = (-cos(theta) sin^{m-1}(theta) + (m-1) S_{m-2}) / m.
// Closed form; used by the reference profiles (the foliation measures go
// through the adaptive quadrature instead so the two routes stay distinct).
inline double sin_power_integral(int m, double theta) {
  if (m < 0) throw ConfigError("sin_power_integral: negative power");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double s0 = theta;      // m = 0
  double s1 = 1.0 - c;    // m = 1
  if (m == 0) return s0;
  if (m == 1) return s1;
  double prev = s0, cur = s1;  // S_{k-1}, S_k with k starting at 1
  for (int k = 2; k <= m; ++k) {
    double next = (-c * std::pow(s, k - 1) + (k - 1) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Root of a continuous function on [lo, hi] with f(lo), f(hi) of opposite
// sign (or zero). Plain bisection; terminates when the bracket width drops
// below xtol plus a few ulps of the endpoint magnitude.
inline double bisect_root(const std::function<double(double)>& f, double lo,
                          double hi, double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw NotBracketedError("bisect_root: endpoints do not straddle a root");
  while (hi - lo > xtol + 4.0 * kEps * std::max(std::abs(lo), std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at ulp resolution
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Brent's method: bisection safety with inverse-quadratic acceleration.
inline double brent_root(const std::function<double(double)>& f, double a,
                         double b, double xtol, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    throw NotBracketedError("brent_root: endpoints do not straddle a root");
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      e = d = b - a;
    }
  }
  return b;
}

// Limit of a convergent sequence sampled on a geometric grid, by iterated
// Aitken delta-squared. Safe on already-converged tails: a sweep is skipped
// whenever the second difference falls below the roundoff floor.
inline double accelerate_limit(std::span<const double> seq) {
  if (seq.empty()) throw ConfigError("accelerate_limit: empty sequence");
  std::vector<double> cur(seq.begin(), seq.end());
  for (int sweep = 0; sweep < 4 && cur.size() >= 3; ++sweep) {
    std::vector<double> next;
    next.reserve(cur.size() - 2);
    bool usable = true;
    for (std::size_t i = 0; i + 2 < cur.size(); ++i) {
      const double d1 = cur[i + 1] - cur[i];
      const double d2 = cur[i + 2] - cur[i + 1];
      const double denom = d2 - d1;
      const double scale =
          std::abs(cur[i]) + std::abs(cur[i + 1]) + std::abs(cur[i + 2]);
      if (std::abs(denom) <= 64.0 * kEps * (scale + 1e-300)) {
        usable = false;
        break;
      }
      next.push_back(cur[i + 2] - d2 * d2 / denom);
    }
    if (!usable || next.empty()) break;
    cur = std::move(next);
  }
  return cur.back();
}

}  // namespace isocone
