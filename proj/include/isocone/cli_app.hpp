#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isocone/asymptote.hpp"
#include "isocone/config.hpp"
#include "isocone/errors.hpp"
#include "isocone/foliation.hpp"
#include "isocone/reference_profile.hpp"
#include "isocone/report.hpp"
#include "isocone/solver.hpp"
#include "isocone/spectral.hpp"

#include "CLI11.hpp"

namespace isocone {

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void append_check(std::vector<CheckResult>& checks,
                         const std::string& name, bool pass,
                         const std::string& detail) {
  checks.push_back({name, pass, detail});
}

}  // namespace detail

// Volume-ladder workflow: solve every volume, emit profile.csv, and check
// the profile properties (cone lower bound, half-space upper bound,
// monotonicity, concavity of the renormalized profile, asymptotic ratio,
// scale-free curvature bound). The sandwich is re-asserted on each row as
// it is emitted.
inline std::vector<CheckResult> cmd_profile(
    const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.volumes)
    throw ConfigError("profile: config needs a [volumes] section");
  const BodyOfRevolution body = make_body(cfg.body);
  const ConeOfRevolution cone =
      asymptotic_cone(body, cfg.tolerances.at("asymptote"));
  const ReferenceProfile ref_cone = make_cone_profile(cone.slope, body.n);
  const ReferenceProfile ref_half = make_halfspace_profile(body.n);
  const std::vector<double> volumes = cfg.volumes->values();
  const ProfileCurve curve = sample_profile(body, volumes);

  const double tol_sandwich = cfg.tolerances.at("sandwich");
  bool lower_ok = true, upper_ok = true;
  double worst_lower = 1e300, worst_upper = -1e300;
  CsvBuilder csv("v,P_upper,I_cone,I_halfspace,ratio,Y,H,mechanism,cap_station");
  for (const auto& s : curve.samples) {
    const double ic = ref_cone.perimeter(s.volume);
    const double ih = ref_half.perimeter(s.volume);
    const double p = s.estimate.perimeter_upper_bound;
    const double ratio = p / ic;
    if (p < ic * (1.0 - tol_sandwich)) lower_ok = false;
    if (p > ih * (1.0 + tol_sandwich)) upper_ok = false;
    worst_lower = std::min(worst_lower, ratio - 1.0);
    worst_upper = std::max(worst_upper, p / ih - 1.0);
    csv.add_row({format_g9(s.volume), format_g9(p), format_g9(ic),
                 format_g9(ih), format_g9(ratio), format_g9(s.renormalized),
                 format_g9(s.estimate.mean_curvature),
                 mechanism_name(s.estimate.mechanism),
                 s.estimate.cap_station ? format_g9(*s.estimate.cap_station)
                                        : ""});
  }
  write_text_atomic(out_dir / "profile.csv", csv.text());

  std::vector<CheckResult> checks;
  {
    std::string detail = "all " + std::to_string(curve.samples.size()) +
                         " volumes solved";
    if (!curve.failures.empty())
      detail = "v=" + format_g9(curve.failures.front().first) + ": " +
               curve.failures.front().second;
    detail::append_check(checks, "all_volumes_solved",
                         curve.failures.empty(), detail);
  }
  detail::append_check(checks, "cone_lower_bound", lower_ok,
                       "min(P/I_cone - 1) = " + format_g9(worst_lower));
  detail::append_check(checks, "halfspace_upper_bound", upper_ok,
                       "max(P/I_halfspace - 1) = " + format_g9(worst_upper));

  bool monotone = true;
  for (std::size_t i = 1; i < curve.samples.size(); ++i)
    if (curve.samples[i].estimate.perimeter_upper_bound <
        curve.samples[i - 1].estimate.perimeter_upper_bound *
            (1.0 - 1e-12))
      monotone = false;
  detail::append_check(checks, "perimeter_nondecreasing", monotone, "");

  // Concavity of the renormalized profile, as slope differences on the
  // sampled (volume, Y) polygon.
  const double tol_concavity = cfg.tolerances.at("concavity");
  double worst_d2 = -1e300;
  for (std::size_t i = 2; i < curve.samples.size(); ++i) {
    const auto& s0 = curve.samples[i - 2];
    const auto& s1 = curve.samples[i - 1];
    const auto& s2 = curve.samples[i];
    const double slope1 =
        (s1.renormalized - s0.renormalized) / (s1.volume - s0.volume);
    const double slope2 =
        (s2.renormalized - s1.renormalized) / (s2.volume - s1.volume);
    worst_d2 = std::max(worst_d2, slope2 - slope1);
  }
  detail::append_check(checks, "renormalized_concave",
                       curve.samples.size() < 3 || worst_d2 <= tol_concavity,
                       "max slope increase = " + format_g9(worst_d2));

  if (!curve.samples.empty() &&
      curve.samples.back().volume >= 1e3 * curve.samples.front().volume) {
    try {
      const AsymptoticsReport rep = verify_asymptotics(
          curve, cone, tol_sandwich, cfg.tolerances.at("final_ratio_margin"));
      detail::append_check(checks, "ratio_trend_downward", rep.trend_ok,
                           "final ratio = " + format_g9(rep.final_ratio));
      detail::append_check(checks, "final_ratio_margin", rep.final_margin_ok,
                           "ratio - 1 = " + format_g9(rep.final_ratio - 1.0));
    } catch (const LowerBoundViolatedError& e) {
      detail::append_check(checks, "ratio_trend_downward", false, e.what());
    }
  }

  if (!curve.samples.empty()) {
    const CurvatureBoundReport rep = verify_mean_curvature_bound(curve);
    detail::append_check(
        checks, "curvature_scale_free_bounded", rep.bounded,
        "max = " + format_g9(rep.max_value) +
            ", median = " + format_g9(rep.median_value));
  }
  return checks;
}

// Foliation workflow: chart the spherical-cap leaves from the threshold
// outward, emit foliation.csv, and check the foliation invariants.
inline std::vector<CheckResult> cmd_foliation(
    const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.foliation)
    throw ConfigError("foliation: config needs a [foliation] section");
  const BodyOfRevolution body = make_body(cfg.body);
  const double threshold = foliation_threshold(body);
  double start = threshold * (1.0 + 1e-9);
  if (cfg.foliation->x_min > 0)
    start = std::max(start, cfg.foliation->x_min);
  const double stop = cfg.foliation->x_max;
  if (!(stop > start))
    throw ConfigError("foliation: x_max must exceed the foliation "
                      "threshold " +
                      format_g9(threshold));
  std::vector<double> stations;
  const int m = cfg.foliation->points;
  for (int k = 0; k < m; ++k) {
    const double t = m == 1 ? 0.0 : static_cast<double>(k) / (m - 1);
    stations.push_back(start * std::pow(stop / start, t));
  }
  const FoliationChart chart = sample_chart(body, stations);

  CsvBuilder csv("x,c,r,H,gprime,volume,perimeter");
  bool gprime_pos = true, h_mono = true;
  double worst_residual = 0;
  double prev_h = 0;
  std::vector<double> gprimes;
  for (std::size_t i = 0; i < chart.caps.size(); ++i) {
    const FoliationCap& cap = chart.caps[i];
    const double gp = foliation_gprime(body, cap.station);
    gprimes.push_back(gp);
    if (!(gp > 0)) gprime_pos = false;
    if (i > 0 && cap.mean_curvature > prev_h * (1.0 + 1e-12)) h_mono = false;
    prev_h = cap.mean_curvature;
    // orthogonal meeting: the radius vector at the contact point must be
    // parallel to the graph tangent
    const double fx = body.profile.eval(cap.station);
    const double fp = body.profile.deriv(cap.station);
    const double residual =
        std::abs(cap.station * fp - (fx - cap.center_height)) / cap.radius;
    worst_residual = std::max(worst_residual, residual);
    csv.add_row({format_g9(cap.station), format_g9(cap.center_height),
                 format_g9(cap.radius), format_g9(cap.mean_curvature),
                 format_g9(gp), format_g9(cap.enclosed_volume),
                 format_g9(cap.cap_perimeter)});
  }
  write_text_atomic(out_dir / "foliation.csv", csv.text());

  std::vector<CheckResult> checks;
  detail::append_check(checks, "gprime_positive_beyond_threshold",
                       gprime_pos,
                       "threshold x_m = " + format_g9(threshold));
  detail::append_check(checks, "curvature_nonincreasing", h_mono, "");
  detail::append_check(checks, "orthogonality_residual",
                       worst_residual < 1e-12,
                       "max residual = " + format_g9(worst_residual));
  if (stop >= 1e3 * start && chart.caps.size() >= 2) {
    const double h0 = chart.caps.front().mean_curvature;
    const double h1 = chart.caps.back().mean_curvature;
    detail::append_check(checks, "curvature_decade_decay", h1 < 0.01 * h0,
                         "H drops from " + format_g9(h0) + " to " +
                             format_g9(h1));
  }
  try {
    const AsymptoteData asym =
        detect_asymptote(body.profile, cfg.tolerances.at("asymptote"));
    const double limit = std::sqrt(1.0 + asym.slope * asym.slope);
    const double err = std::abs(gprimes.back() - limit);
    detail::append_check(checks, "gprime_limit", err < 1e-4,
                         "g' at ladder top = " + format_g9(gprimes.back()) +
                             ", limit = " + format_g9(limit));
  } catch (const NoAsymptoteError&) {
    // no affine asymptote: the slope limit check does not apply
  }
  return checks;
}

// Eigenvalue workflow: Neumann certificate across the cap radius ladder,
// emitting eigen.csv. Margins must be positive and the second-variation
// kernel trivial strictly inside the hemisphere.
inline std::vector<CheckResult> cmd_eigen(
    const RunConfig& cfg, const std::filesystem::path& out_dir) {
  if (!cfg.eigen) throw ConfigError("eigen: config needs an [eigen] section");
  const EigenConfig& ec = *cfg.eigen;
  const double strict_limit = 0.5 * M_PI * ec.R - 0.01;

  CsvBuilder csv("r,mu,n_over_R2,margin,kernel_dim");
  bool margins_pos = true, kernel_trivial = true;
  double min_margin = 1e300;
  for (double r : ec.values()) {
    const CapSpectrum spec = neumann_mu1({ec.n, ec.R, r});
    const double n_over_r2 = ec.n / (ec.R * ec.R);
    csv.add_row({format_g9(r), format_g9(spec.mu1), format_g9(n_over_r2),
                 format_g9(spec.neumann_margin),
                 std::to_string(spec.kernel_dim)});
    if (r < strict_limit) {
      if (!(spec.neumann_margin > 0)) margins_pos = false;
      if (spec.kernel_dim != 0) kernel_trivial = false;
      min_margin = std::min(min_margin, spec.neumann_margin);
    }
  }
  write_text_atomic(out_dir / "eigen.csv", csv.text());

  std::vector<CheckResult> checks;
  detail::append_check(checks, "margins_positive", margins_pos,
                       min_margin < 1e300
                           ? "min margin = " + format_g9(min_margin)
                           : "no radii strictly inside the hemisphere");
  detail::append_check(checks, "kernel_trivial", kernel_trivial, "");
  return checks;
}

inline void write_summary(const std::filesystem::path& out_dir,
                          const std::string& command, const RunConfig& cfg,
                          const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["all_pass"] = all_pass(checks);
  j["checks"] = checks_to_json(checks);
  nlohmann::ordered_json tols;
  for (const auto& [k, t] : cfg.tolerances) tols[k] = t;
  j["tolerances"] = tols;
  j["config_echo"] = normalized_config(cfg);
  write_text_atomic(out_dir / "summary.json", j.dump(2) + "\n");
}

// Entry point behind main(). Exit codes: 0 all checks pass, 2 config or
// domain error (including a body with no affine asymptote), 3 a
// verification check failed or the numerics broke down.
inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "numerical laboratory for unbounded convex bodies of revolution:\n"
      "isoperimetric upper bounds, spherical-cap foliations, and Neumann\n"
      "eigenvalue certificates"};
  app.require_subcommand(1);
  std::string config_path, out_override;
  std::vector<std::string> tol_overrides;
  const char* names[] = {"profile", "foliation", "eigen", "verify-all"};
  const char* descs[] = {
      "volume ladder: upper bounds and profile checks",
      "spherical-cap foliation chart and invariants",
      "Neumann eigenvalue certificate on cap ladders",
      "profile + foliation + eigen in one run"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "run configuration (INI)")
        ->required();
    sub->add_option("--out", out_override,
                    "output directory (overrides [output] dir)");
    sub->add_option("--tol-override", tol_overrides,
                    "tolerance override key=value (repeatable)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = parse_run_config(detail::read_file(config_path));
    for (const auto& o : tol_overrides) apply_tol_override(cfg, o);
    if (!out_override.empty()) cfg.output.dir = out_override;
    if (cfg.output.format != "csv")
      throw ConfigError("unsupported output format '" + cfg.output.format +
                        "'");
    const std::filesystem::path out_dir = cfg.output.dir;

    std::string command;
    std::vector<CheckResult> checks;
    if (app.got_subcommand("profile")) {
      command = "profile";
      checks = cmd_profile(cfg, out_dir);
    } else if (app.got_subcommand("foliation")) {
      command = "foliation";
      checks = cmd_foliation(cfg, out_dir);
    } else if (app.got_subcommand("eigen")) {
      command = "eigen";
      checks = cmd_eigen(cfg, out_dir);
    } else {
      command = "verify-all";
      for (const auto& c : cmd_profile(cfg, out_dir))
        checks.push_back({"profile/" + c.name, c.pass, c.detail});
      for (const auto& c : cmd_foliation(cfg, out_dir))
        checks.push_back({"foliation/" + c.name, c.pass, c.detail});
      for (const auto& c : cmd_eigen(cfg, out_dir))
        checks.push_back({"eigen/" + c.name, c.pass, c.detail});
    }
    write_summary(out_dir, command, cfg, checks);
    for (const auto& c : checks)
      std::fprintf(stderr, "%-40s %s  %s\n", c.name.c_str(),
                   c.pass ? "PASS" : "FAIL", c.detail.c_str());
    return all_pass(checks) ? 0 : 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const NoAsymptoteError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DegenerateSlopeError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "verification failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
}

}  // namespace isocone
