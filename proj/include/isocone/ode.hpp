#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/numerics.hpp"

namespace isocone {

// Embedded Dormand-Prince 5(4) pair, adaptive steps, first-same-as-last.
// Event crossings are located by Brent iteration on re-integrated substeps
// of the bracketing step, so the reported crossing is as accurate as the
// integration tolerance itself.
namespace dp45 {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                        c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                        e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace dp45

enum class OdeStop { reached_end, event, guard };

template <std::size_t N>
struct OdeOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double h_init = 0;  // 0: derive from the interval
  bool store_path = false;
  long max_steps = 2000000;
};

template <std::size_t N>
struct OdeResult {
  OdeStop status = OdeStop::reached_end;
  double s = 0;
  std::array<double, N> y{};
  std::vector<std::pair<double, std::array<double, N>>> path;
};

template <std::size_t N, typename Deriv>
class DormandPrince {
 public:
  DormandPrince(Deriv deriv, OdeOptions<N> opt)
      : deriv_(std::move(deriv)), opt_(opt) {}

  // One trial step from (s, y) with size h. Returns the scaled error norm;
  // fills y_out and k7 (derivative at y_out, reusable as next k1).
  double step(double s, const std::array<double, N>& y,
              const std::array<double, N>& k1, double h,
              std::array<double, N>& y_out, std::array<double, N>& k7) const {
    using namespace dp45;
    std::array<double, N> k2, k3, k4, k5, k6, tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    deriv_(s + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    deriv_(s + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    deriv_(s + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] +
               h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    deriv_(s + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    deriv_(s + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                             b5 * k5[i] + b6 * k6[i]);
    deriv_(s + h, y_out, k7);
    double err = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                             e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc =
          opt_.abs_tol +
          opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y_out[i]));
      err += (ei / sc) * (ei / sc);
    }
    return std::sqrt(err / N);
  }

  // Integrate from (s0, y0) to s_end without events; used for event
  // sharpening and plain propagation.
  std::array<double, N> propagate(double s0, std::array<double, N> y,
                                  double s_end) const {
    double s = s0;
    double h = initial_step(s0, s_end);
    std::array<double, N> k1, k7, ynew;
    deriv_(s, y, k1);
    long steps = 0;
    while (s < s_end) {
      h = std::min(h, s_end - s);
      const double err = step(s, y, k1, h, ynew, k7);
      if (err <= 1.0) {
        s += h;
        y = ynew;
        k1 = k7;
      }
      h *= clamp_factor(err);
      if (++steps > opt_.max_steps)
        throw SolverDivergedError("ode propagate: step budget exhausted");
    }
    return y;
  }

  double initial_step(double s0, double s_end) const {
    return opt_.h_init > 0 ? opt_.h_init : (s_end - s0) * 1e-4;
  }

  static double clamp_factor(double err) {
    const double f = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
    return std::min(5.0, std::max(0.2, f));
  }

  const Deriv& deriv() const { return deriv_; }
  const OdeOptions<N>& options() const { return opt_; }

 private:
  Deriv deriv_;
  OdeOptions<N> opt_;
};

template <std::size_t N>
using OdeEvent = std::function<double(double, const std::array<double, N>&)>;
template <std::size_t N>
using OdeGuard = std::function<bool(double, const std::array<double, N>&)>;

// Full driver. `event` (optional) is a scalar function of (s, y); the
// integration stops at its first sign change, sharpened by Brent on
// re-integrated substeps. `guard` (optional) stops integration when true.
template <std::size_t N, typename Deriv>
OdeResult<N> integrate_ode(Deriv deriv, std::array<double, N> y0, double s0,
                           double s_end, OdeOptions<N> opt,
                           OdeEvent<N> event = {}, OdeGuard<N> guard = {}) {
  DormandPrince<N, Deriv> rk(deriv, opt);
  OdeResult<N> out;
  double s = s0;
  std::array<double, N> y = y0, k1, k7, ynew;
  deriv(s, y, k1);
  double h = rk.initial_step(s0, s_end);
  double e_prev = event ? event(s, y) : 1.0;
  if (opt.store_path) out.path.push_back({s, y});
  long steps = 0;
  while (s < s_end) {
    h = std::min(h, s_end - s);
    const double err = rk.step(s, y, k1, h, ynew, k7);
    if (err <= 1.0) {
      const double s_new = s + h;
      if (event) {
        const double e_new = event(s_new, ynew);
        if ((e_prev > 0) != (e_new > 0) || e_new == 0.0) {
          // crossing inside (s, s_new): Brent on substep re-integration
          const double s_from = s;
          const std::array<double, N> y_from = y;
          auto eval = [&](double st) {
            if (st <= s_from) return e_prev;
            return event(st, rk.propagate(s_from, y_from, st));
          };
          const double s_hit =
              brent_root(eval, s_from, s_new,
                         1e-13 * std::max(1.0, std::abs(s_new)));
          out.status = OdeStop::event;
          out.s = s_hit;
          out.y = s_hit <= s_from ? y_from : rk.propagate(s_from, y_from, s_hit);
          if (opt.store_path) out.path.push_back({out.s, out.y});
          return out;
        }
        e_prev = e_new;
      }
      s = s_new;
      y = ynew;
      k1 = k7;
      if (opt.store_path) out.path.push_back({s, y});
      if (guard && guard(s, y)) {
        out.status = OdeStop::guard;
        out.s = s;
        out.y = y;
        return out;
      }
    }
    h *= rk.clamp_factor(err);
    if (++steps > opt.max_steps)
      throw SolverDivergedError("integrate_ode: step budget exhausted");
  }
  out.status = OdeStop::reached_end;
  out.s = s;
  out.y = y;
  return out;
}

}  // namespace isocone
