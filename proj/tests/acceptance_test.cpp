// Acceptance gate: one PASS/FAIL line per criterion, exit code = number of
// failures. argv[1] is the path to the command-line binary (used by the
// determinism criterion; the rest exercise the library directly).

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "isocone/asymptote.hpp"
#include "isocone/config.hpp"
#include "isocone/foliation.hpp"
#include "isocone/generating_function.hpp"
#include "isocone/reference_profile.hpp"
#include "isocone/solver.hpp"
#include "isocone/spectral.hpp"

namespace fs = std::filesystem;
using namespace isocone;

namespace {

struct CheckFailed {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailed{what};
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Shared profile curve for the hyperbolic witness body (a = 1, s = 1,
// n = 1, volumes 1..1e4 geometric). Computed once; several criteria read it.
struct SharedCurve {
  BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  ConeOfRevolution cone;
  ProfileCurve curve;
  double build_seconds = 0;
};

const SharedCurve& shared_curve() {
  static const SharedCurve sc = [] {
    SharedCurve s;
    const auto start = std::chrono::steady_clock::now();
    s.cone = asymptotic_cone(s.body);
    std::vector<double> vols;
    for (int i = 0; i < 17; ++i) vols.push_back(std::pow(10.0, 4.0 * i / 16));
    s.curve = sample_profile(s.body, vols);
    require(s.curve.failures.empty(), "shared curve has unsolved volumes");
    s.build_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return s;
  }();
  return sc;
}

// --- criterion bodies ------------------------------------------------------

void cone_oracle() {
  for (double a : {0.5, 1.0, 2.0}) {
    for (int n : {1, 2}) {
      const BodyOfRevolution body{n, make_cone(a)};
      const ReferenceProfile ref = make_cone_profile(a, n);
      for (double v : {1.0, 10.0, 100.0}) {
        const IsoperimetricEstimate est = solve_volume(body, v);
        const double exact = ref.perimeter(v);
        const double err = std::abs(est.perimeter_upper_bound - exact) / exact;
        require(err <= 1e-4, "a=" + num(a) + " n=" + std::to_string(n) +
                                 " v=" + num(v) + ": relative error " +
                                 num(err));
      }
    }
  }
}

void scaling_law() {
  const BodyOfRevolution body{1, make_hyperbolic(1.0, 1.0)};
  const int n = body.n;
  for (double v : {2.0, 20.0}) {
    const double base = solve_volume(body, v).perimeter_upper_bound;
    for (double lam : {2.0, 3.0}) {
      const BodyOfRevolution scaled = scale_body(body, lam);
      const double got =
          solve_volume(scaled, std::pow(lam, n + 1) * v).perimeter_upper_bound;
      const double want = std::pow(lam, n) * base;
      const double err = std::abs(got - want) / want;
      require(err <= 1e-6, "lambda=" + num(lam) + " v=" + num(v) +
                               ": relative error " + num(err));
    }
  }
}

void sandwich() {
  const SharedCurve& sc = shared_curve();
  const ReferenceProfile lo = make_cone_profile(sc.cone.slope, sc.curve.n);
  const ReferenceProfile hi = make_halfspace_profile(sc.curve.n);
  for (const auto& s : sc.curve.samples) {
    const double p = s.estimate.perimeter_upper_bound;
    require(p >= lo.perimeter(s.volume) * (1.0 - 1e-6),
            "v=" + num(s.volume) + ": estimate below the cone profile");
    require(p <= hi.perimeter(s.volume) * (1.0 + 1e-6),
            "v=" + num(s.volume) + ": estimate above the half-space profile");
  }
}

void asymptotic_ratio() {
  const SharedCurve& sc = shared_curve();
  const AsymptoticsReport rep = verify_asymptotics(sc.curve, sc.cone);
  require(rep.trend_ok, "decade-averaged ratio not trending down");
  require(rep.final_margin_ok,
          "final ratio " + num(rep.final_ratio) + " further than 0.05 from 1");
}

void concavity_and_monotonicity() {
  auto check_grid = [](const ProfileCurve& curve, const std::string& tag) {
    const auto& s = curve.samples;
    for (std::size_t i = 1; i < s.size(); ++i)
      require(s[i].estimate.perimeter_upper_bound >=
                  s[i - 1].estimate.perimeter_upper_bound * (1.0 - 1e-12),
              tag + ": perimeter decreases at v=" + num(s[i].volume));
    for (std::size_t i = 2; i < s.size(); ++i) {
      const double s0 = (s[i - 1].renormalized - s[i - 2].renormalized) /
                        (s[i - 1].volume - s[i - 2].volume);
      const double s1 = (s[i].renormalized - s[i - 1].renormalized) /
                        (s[i].volume - s[i - 1].volume);
      require(s1 - s0 <= 1e-6, tag + ": renormalized profile convex near v=" +
                                   num(s[i - 1].volume));
    }
  };
  check_grid(shared_curve().curve, "hyperbolic");
  const BodyOfRevolution cone{2, make_cone(1.0)};
  check_grid(sample_profile(cone, {1.0, 10.0, 100.0}), "cone");
}

void foliation_checks() {
  struct Witness {
    std::string tag;
    BodyOfRevolution body;
    double slope;
  };
  const std::vector<Witness> witnesses = {
      {"hyperbolic", {1, make_hyperbolic(1.0, 1.0)}, 1.0},
      {"hinge", {2, fixtures::make_smoothed_hinge(1.0, 5.0, 0.5)}, 1.0},
  };
  for (const auto& w : witnesses) {
    const double xm = foliation_threshold(w.body);
    const double start = xm * 1.001;
    const double top = std::max(1e3, start * 1e3);
    std::vector<double> stations;
    const int m = 80;
    for (int i = 0; i < m; ++i)
      stations.push_back(start * std::pow(top / start, double(i) / (m - 1)));
    const FoliationChart chart = sample_chart(w.body, stations);
    for (double x : stations)
      require(foliation_gprime(w.body, x) > 0,
              w.tag + ": apex-height derivative not positive at x=" + num(x));
    const double limit = std::sqrt(1.0 + w.slope * w.slope);
    const double top_err =
        std::abs(foliation_gprime(w.body, top) - limit);
    require(top_err <= 1e-4, w.tag + ": apex-height derivative misses " +
                                 num(limit) + " by " + num(top_err));
    const auto& caps = chart.caps;
    for (std::size_t i = 1; i < caps.size(); ++i)
      require(caps[i].mean_curvature <=
                  caps[i - 1].mean_curvature * (1.0 + 1e-12),
              w.tag + ": curvature increases along the chart");
    require(caps.back().mean_curvature <
                0.01 * caps.front().mean_curvature,
            w.tag + ": curvature drop less than 100x over three decades");
    for (const auto& cap : caps) {
      const double x = cap.station;
      const double fx = w.body.profile.eval(x);
      const double d = w.body.profile.deriv(x);
      const double res =
          std::abs(x * d - (fx - cap.center_height)) / cap.radius;
      require(res < 1e-12,
              w.tag + ": orthogonality residual " + num(res) + " at x=" +
                  num(x));
    }
  }
}

void large_volume_caps() {
  for (int n : {1, 2}) {
    const BodyOfRevolution body{n, make_hyperbolic(1.0, 1.0)};
    const CapAgreementReport rep =
        verify_large_volume_caps(body, {10.0, 100.0, 1000.0}, 1e-4);
    for (const auto& row : rep.rows) {
      require(!row.out_of_regime,
              "n=" + std::to_string(n) + " v=" + num(row.volume) +
                  ": below the foliated regime");
      require(row.circle_match, "n=" + std::to_string(n) +
                                    " v=" + num(row.volume) +
                                    ": hit circle off the cap circle");
    }
    require(rep.gaps_decreasing,
            "n=" + std::to_string(n) + ": perimeter gap not decreasing");
    require(rep.final_gap <= 1e-4,
            "n=" + std::to_string(n) + ": final gap " + num(rep.final_gap));
  }
}

void curvature_constant() {
  const SharedCurve& sc = shared_curve();
  const CurvatureBoundReport rep = verify_mean_curvature_bound(sc.curve);
  require(rep.bounded, "H v^{1/(n+1)} spread exceeds 10x (max " +
                           num(rep.max_value) + ", median " +
                           num(rep.median_value) + ")");
  const double sigma = cone_sector_measure(sc.cone.slope, sc.curve.n);
  const double cone_constant =
      std::pow(sigma / (sc.curve.n + 1), 1.0 / (sc.curve.n + 1));
  const double final_err =
      std::abs(rep.values.back() - cone_constant) / cone_constant;
  require(final_err <= 0.05, "final value " + num(rep.values.back()) +
                                 " vs cone constant " + num(cone_constant));
}

// Independent flat-disc oracle: first positive root of
// J_{n/2-1}(p) = (n-1) J_{n/2}(p) / p, the Neumann condition for the first
// nonzero radial-degree-one eigenvalue of the unit flat disc in dimension n.
double disc_neumann_root(int n) {
  auto h = [n](double p) {
    return std::cyl_bessel_j(n / 2.0 - 1.0, p) -
           (n - 1) * std::cyl_bessel_j(n / 2.0, p) / p;
  };
  double lo = 1.0, hi = 2.8;
  require(h(lo) > 0 && h(hi) < 0, "disc oracle bracket failed");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void eigen_certificate() {
  for (int n : {2, 3}) {
    const double R = 1.0;
    const double r_top = M_PI * R / 2.0 - 0.01;
    for (int i = 0; i < 12; ++i) {
      const double r = 0.1 + (r_top - 0.1) * i / 11.0;
      const CapSpectrum s = neumann_mu1({n, R, r});
      require(s.neumann_margin > 0, "n=" + std::to_string(n) + " r=" +
                                        num(r) + ": margin " +
                                        num(s.neumann_margin));
      require(s.kernel_dim == 0, "n=" + std::to_string(n) + " r=" + num(r) +
                                     ": kernel dimension " +
                                     std::to_string(s.kernel_dim));
    }
    const CapSpectrum hemi = neumann_mu1({n, R, M_PI * R / 2.0});
    require(std::abs(hemi.mu1 - n / (R * R)) <= 1e-3,
            "n=" + std::to_string(n) + ": hemisphere eigenvalue " +
                num(hemi.mu1));
    const double r0 = 0.01;
    const CapSpectrum flat = neumann_mu1({n, R, r0});
    const double p = disc_neumann_root(n);
    const double err = std::abs(flat.mu1 * r0 * r0 - p * p) / (p * p);
    require(err <= 0.01, "n=" + std::to_string(n) +
                             ": flat limit off the disc value by " + num(err));
  }
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism(const std::string& cli) {
  require(!cli.empty(), "no command-line binary given (argv[1])");
  const fs::path tmp = fs::temp_directory_path() /
                       ("isocone_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const fs::path cfg = tmp / "run.ini";
  {
    std::ofstream out(cfg);
    out << "[body]\nfamily = cone\na = 1.0\nn = 1\n"
           "[volumes]\nmin = 1.0\nmax = 1000.0\npoints = 4\n"
           "[foliation]\nx_min = 0.05\nx_max = 50.0\npoints = 10\n"
           "[eigen]\nn = 2\nR = 1.0\nr_min = 0.3\nr_max = 1.2\npoints = 4\n";
  }
  for (const char* sub : {"a", "b"}) {
    const std::string cmd = "'" + cli + "' verify-all --config '" +
                            cfg.string() + "' --out '" +
                            (tmp / sub).string() + "' >'" +
                            (tmp / (std::string(sub) + ".log")).string() +
                            "' 2>&1";
    const int code = run_command(cmd);
    require(code == 0,
            "verify-all exited with " + std::to_string(code));
  }
  for (const char* f : {"profile.csv", "foliation.csv", "eigen.csv"}) {
    require(slurp(tmp / "a" / f) == slurp(tmp / "b" / f),
            std::string(f) + " differs between identical runs");
  }
  std::error_code ec;
  fs::remove_all(tmp, ec);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Criterion {
    int id;
    const char* name;
    std::function<void()> body;
    double budget_seconds;  // 0 = untimed
    bool add_shared_build;  // charge the shared-curve build to this budget
  };
  const std::vector<Criterion> criteria = {
      {1, "cone profile matches the vertex-ball closed form", cone_oracle,
       10.0, false},
      {2, "profile obeys the dilation scaling law", scaling_law, 30.0, false},
      {3, "estimates sit between cone and half-space profiles", sandwich, 0.0,
       false},
      {4, "ratio to the cone profile trends to one", asymptotic_ratio, 120.0,
       true},
      {5, "renormalized profile concave, perimeter non-decreasing",
       concavity_and_monotonicity, 0.0, false},
      {6, "spherical-cap foliation beyond the threshold", foliation_checks,
       0.0, false},
      {7, "large-volume estimates agree with foliation caps",
       large_volume_caps, 300.0, false},
      {8, "scale-free curvature approaches the cone constant",
       curvature_constant, 0.0, false},
      {9, "cap eigenvalue certificate: margins, limits, kernel",
       eigen_certificate, 30.0, false},
      {10, "verify-all emits byte-identical CSVs",
       [&cli] { determinism(cli); }, 0.0, false},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::optional<std::string> failure;
    try {
      c.body();
    } catch (const CheckFailed& e) {
      failure = e.what;
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.add_shared_build && !failure) elapsed += shared_curve().build_seconds;
    if (!failure && c.budget_seconds > 0 && elapsed > c.budget_seconds)
      failure = "took " + num(elapsed) + "s, budget " +
                num(c.budget_seconds) + "s";
    if (failure) {
      ++failures;
      std::printf("FAIL %2d %s: %s\n", c.id, c.name, failure->c_str());
    } else {
      std::printf("PASS %2d %s (%.1fs)\n", c.id, c.name, elapsed);
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
