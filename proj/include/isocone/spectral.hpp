#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/numerics.hpp"
#include "isocone/ode.hpp"

namespace isocone {

// Geodesic cap of radius r on the n-sphere of radius R. The boundary is
// free (Neumann); caps up to and including the hemisphere are accepted.
struct CapSpectrumQuery {
  int n = 1;      // sphere dimension (the cap is n-dimensional)
  double R = 1;   // sphere radius
  double r = 1;   // geodesic cap radius, 0 < r <= pi*R/2
};

// Second-variation operator data for the cap: -Laplacian - potential with
// a Robin coefficient on the boundary (zero here, the free boundary meets
// the cone orthogonally along a geodesic).
struct CapStabilityProblem {
  double potential_constant = 0;    // n / R^2
  double boundary_coefficient = 0;  // Neumann
};

struct SectorWave {
  double value = 0;       // phi(theta0)
  double derivative = 0;  // phi'(theta0)
};

struct CapSpectrum {
  double theta0 = 0;          // opening angle r / R
  double mu1 = 0;             // first nonzero Neumann eigenvalue
  double mu1_scaled = 0;      // same on the unit sphere (mu1 * R^2)
  int mu1_sector = 1;         // angular degree attaining it
  double neumann_margin = 0;  // mu1 - n / R^2
  int kernel_dim = 0;         // dim ker(second variation) at the threshold
  bool hemisphere_marginal = false;
};

inline void validate_query(const CapSpectrumQuery& q) {
  if (q.n < 1) throw ConfigError("cap spectrum: n must be >= 1");
  if (!(q.R > 0)) throw ConfigError("cap spectrum: R must be positive");
  if (!(q.r > 0)) throw ConfigError("cap spectrum: r must be positive");
  const double theta0 = q.r / q.R;
  if (theta0 > 0.5 * M_PI * (1.0 + 1e-12))
    throw ConfigError("cap spectrum: cap exceeds the hemisphere");
}

inline CapStabilityProblem make_stability_problem(const CapSpectrumQuery& q) {
  validate_query(q);
  return {static_cast<double>(q.n) / (q.R * q.R), 0.0};
}

namespace detail {

// Radial factor of a degree-l harmonic mode on the unit-sphere cap:
//   phi'' + (n-1) cot(theta) phi' + (mu - l(l+n-2)/sin^2(theta)) phi = 0,
// regular branch phi ~ theta^l at the pole. Launched by the series
//   phi = theta^l (1 + d2 theta^2 + d4 theta^4 + ...)
// and integrated to theta0. The overall theta_s^l factor is dropped: the
// equation is linear and only zeros of the boundary data matter.
inline SectorWave sector_wave(int n, int l, double mu, double theta0) {
  const double L = static_cast<double>(l) * (l + n - 2);
  const double d2 = (l * (2.0 * n + l - 3.0) / 3.0 - mu) / (4.0 * l + 2.0 * n);
  const double d4 = ((n - 1.0) * ((l + 2.0) * d2 / 3.0 + l / 45.0) +
                     L * (d2 / 3.0 + 1.0 / 15.0) - mu * d2) /
                    (8.0 * l + 4.0 * n + 8.0);
  double theta_s = std::min(theta0 / 20.0, 1e-3);
  theta_s = std::min(theta_s, 0.1 / std::sqrt(1.0 + std::abs(mu)));
  const double u = 1.0 + d2 * theta_s * theta_s +
                   d4 * theta_s * theta_s * theta_s * theta_s;
  const double up = 2.0 * d2 * theta_s +
                    4.0 * d4 * theta_s * theta_s * theta_s;
  std::array<double, 2> y{u, l * u / theta_s + up};

  auto deriv = [n, L, mu](double theta, const std::array<double, 2>& s,
                          std::array<double, 2>& ds) {
    const double sn = std::sin(theta);
    ds[0] = s[1];
    ds[1] = -(n - 1) * (std::cos(theta) / sn) * s[1] -
            (mu - L / (sn * sn)) * s[0];
  };
  OdeOptions<2> opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  OdeResult<2> res = integrate_ode<2>(deriv, y, theta_s, theta0, opt);
  return {res.y[0], res.y[1]};
}

// Boundary functional whose zeros in mu are the sector's eigenvalues,
// normalized so magnitudes are comparable across mu and l.
inline double sector_wronskian(int n, int l, double mu, double theta0,
                               double R = 1.0, double beta = 0.0) {
  SectorWave w = sector_wave(n, l, mu, theta0);
  const double raw = w.derivative + R * beta * w.value;
  const double scale = std::abs(w.value) + std::abs(w.derivative);
  return scale > 0 ? raw / scale : raw;
}

inline double scan_ceiling(int n, double theta0) {
  const double q = M_PI / theta0;
  return 50.0 * n * (1.0 + q * q);
}

}  // namespace detail

// Smallest positive eigenvalue of the degree-l sector on the unit-sphere
// cap of opening theta0, by a geometric scan for a sign change of the
// boundary functional followed by Brent. For l = 0 the constant mode at
// mu = 0 is skipped by construction (the functional starts negative).
inline double first_sector_eigenvalue(int n, int l, double theta0) {
  const double hi = detail::scan_ceiling(n, theta0);
  double mu_prev = 1e-6;
  double w_prev = detail::sector_wronskian(n, l, mu_prev, theta0);
  const double factor = 1.15;
  for (double mu = mu_prev * factor; mu_prev < hi; mu *= factor) {
    const double w = detail::sector_wronskian(n, l, mu, theta0);
    if ((w_prev > 0) != (w > 0) || w == 0.0) {
      return brent_root(
          [&](double m) { return detail::sector_wronskian(n, l, m, theta0); },
          mu_prev, mu, 1e-12 * mu);
    }
    mu_prev = mu;
    w_prev = w;
  }
  throw NotBracketedError("no sector eigenvalue inside the scan window");
}

// Dimension of the degree-l spherical harmonic space on S^{n-1} (the
// orbit sphere of the cap's boundary).
inline int harmonic_multiplicity(int n, int l) {
  if (l == 0) return 1;
  if (n == 1) return l == 1 ? 1 : 0;  // S^0: one even, one odd function
  if (l == 1) return n;
  if (n == 2) return 2;               // S^1: cos and sin of each degree
  auto choose = [](int a, int b) {
    double c = 1;
    for (int i = 1; i <= b; ++i) c *= static_cast<double>(a - b + i) / i;
    return static_cast<int>(std::llround(c));
  };
  // harmonics of degree l in n variables: C(n+l-1, l) - C(n+l-3, l-2)
  return choose(l + n - 1, l) - choose(l + n - 3, l - 2);
}

// Kernel of the second-variation operator at the threshold value mu = n
// (unit sphere): counts sectors whose boundary functional vanishes there,
// weighted by harmonic multiplicity. Nonzero exactly at the hemisphere.
inline int jacobi_kernel_dim(const CapSpectrumQuery& q,
                             double zero_tol = 1e-7) {
  validate_query(q);
  const double theta0 = q.r / q.R;
  const int l_max = q.n == 1 ? 1 : 8;
  int dim = 0;
  for (int l = 0; l <= l_max; ++l) {
    const double w = detail::sector_wronskian(q.n, l, q.n, theta0);
    if (std::abs(w) < zero_tol) dim += harmonic_multiplicity(q.n, l);
  }
  return dim;
}

// First nonzero Neumann eigenvalue of the cap and the stability margin
// against the threshold n / R^2. Degrees l = 0 and l = 1 compete for the
// bottom of the spectrum; higher degrees only move up.
inline CapSpectrum neumann_mu1(const CapSpectrumQuery& q) {
  validate_query(q);
  CapSpectrum out;
  out.theta0 = q.r / q.R;
  const double mu_l1 = first_sector_eigenvalue(q.n, 1, out.theta0);
  const double mu_l0 = first_sector_eigenvalue(q.n, 0, out.theta0);
  if (mu_l1 <= mu_l0) {
    out.mu1_scaled = mu_l1;
    out.mu1_sector = 1;
  } else {
    out.mu1_scaled = mu_l0;
    out.mu1_sector = 0;
  }
  out.mu1 = out.mu1_scaled / (q.R * q.R);
  out.neumann_margin = out.mu1 - q.n / (q.R * q.R);
  out.hemisphere_marginal = std::abs(out.theta0 - 0.5 * M_PI) < 1e-9;
  out.kernel_dim = jacobi_kernel_dim(q);
  return out;
}

}  // namespace isocone
