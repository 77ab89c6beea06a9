#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "isocone/errors.hpp"
#include "isocone/generating_function.hpp"

namespace isocone {

// Flat INI-style run configuration. Only registered profile families are
// accepted; there is no expression language, so a config file pins a run
// exactly.
struct BodyConfig {
  std::string family;  // hyperbolic | exp-cap | cone | exp
  double a = 1.0;
  double s = 1.0;  // hyperbolic smoothing
  double c = 1.0;  // exp-cap decay scale
  int n = 1;
};

struct VolumeLadder {
  double min = 1.0;
  double max = 1.0;
  int points = 3;
  std::string spacing = "geometric";

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(points);
    for (int k = 0; k < points; ++k) {
      const double t = points == 1 ? 0.0
                                   : static_cast<double>(k) / (points - 1);
      v.push_back(min * std::pow(max / min, t));
    }
    v.front() = min;
    v.back() = max;
    return v;
  }
};

struct FoliationConfig {
  double x_min = 0.0;  // 0: start at the computed foliation threshold
  double x_max = 1.0;
  int points = 3;
};

struct EigenConfig {
  int n = 2;
  double R = 1.0;
  double r_min = 0.1;
  double r_max = 1.0;
  int points = 3;

  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(points);
    for (int k = 0; k < points; ++k) {
      const double t = points == 1 ? 0.0
                                   : static_cast<double>(k) / (points - 1);
      v.push_back(r_min + (r_max - r_min) * t);
    }
    v.front() = r_min;
    v.back() = r_max;
    return v;
  }
};

struct OutputConfig {
  std::string dir = "out";
  std::string format = "csv";
};

inline std::map<std::string, double> default_tolerances() {
  return {
      {"asymptote", 1e-8},         // asymptote detection
      {"sandwich", 1e-6},          // cone lower / half-space upper slack
      {"final_ratio_margin", 0.05},// ratio - 1 at the ladder top
      {"concavity", 1e-6},         // renormalized profile second differences
      {"cap_match", 1e-4},         // shot vs cap relative perimeter gap
  };
}

struct RunConfig {
  BodyConfig body;
  std::optional<VolumeLadder> volumes;
  std::optional<FoliationConfig> foliation;
  std::optional<EigenConfig> eigen;
  std::map<std::string, double> tolerances = default_tolerances();
  OutputConfig output;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, const std::string& where) {
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("bad number for " + where + ": '" + std::string(v) +
                      "'");
  return out;
}

inline int parse_int(std::string_view v, const std::string& where) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("bad integer for " + where + ": '" + std::string(v) +
                      "'");
  return out;
}

inline std::string fmt_full(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline void validate_config(const RunConfig& cfg);

// Parses the INI text: [section] headers, key = value lines, comments with
// '#' or ';' on their own line. Unknown sections or keys are rejected so a
// typo cannot silently fall back to a default.
inline RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  bool saw_volumes = false, saw_foliation = false, saw_eigen = false;
  VolumeLadder vols;
  FoliationConfig fol;
  EigenConfig eig;

  std::string section;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header at line " +
                          std::to_string(lineno));
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "body" && section != "volumes" &&
          section != "foliation" && section != "eigen" &&
          section != "tolerances" && section != "output")
        throw ConfigError("unknown section [" + section + "]");
      if (section == "volumes") saw_volumes = true;
      if (section == "foliation") saw_foliation = true;
      if (section == "eigen") saw_eigen = true;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected key = value at line " +
                        std::to_string(lineno));
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view val = detail::trim(line.substr(eq + 1));
    const std::string where = "[" + section + "] " + key;
    if (section == "body") {
      if (key == "family")
        cfg.body.family = std::string(val);
      else if (key == "a")
        cfg.body.a = detail::parse_double(val, where);
      else if (key == "s")
        cfg.body.s = detail::parse_double(val, where);
      else if (key == "c")
        cfg.body.c = detail::parse_double(val, where);
      else if (key == "n")
        cfg.body.n = detail::parse_int(val, where);
      else
        throw ConfigError("unknown key " + where);
    } else if (section == "volumes") {
      if (key == "min")
        vols.min = detail::parse_double(val, where);
      else if (key == "max")
        vols.max = detail::parse_double(val, where);
      else if (key == "points")
        vols.points = detail::parse_int(val, where);
      else if (key == "spacing")
        vols.spacing = std::string(val);
      else
        throw ConfigError("unknown key " + where);
    } else if (section == "foliation") {
      if (key == "x_min")
        fol.x_min = detail::parse_double(val, where);
      else if (key == "x_max")
        fol.x_max = detail::parse_double(val, where);
      else if (key == "points")
        fol.points = detail::parse_int(val, where);
      else
        throw ConfigError("unknown key " + where);
    } else if (section == "eigen") {
      if (key == "n")
        eig.n = detail::parse_int(val, where);
      else if (key == "R")
        eig.R = detail::parse_double(val, where);
      else if (key == "r_min")
        eig.r_min = detail::parse_double(val, where);
      else if (key == "r_max")
        eig.r_max = detail::parse_double(val, where);
      else if (key == "points")
        eig.points = detail::parse_int(val, where);
      else
        throw ConfigError("unknown key " + where);
    } else if (section == "tolerances") {
      auto it = cfg.tolerances.find(key);
      if (it == cfg.tolerances.end())
        throw ConfigError("unknown tolerance '" + key + "'");
      it->second = detail::parse_double(val, where);
    } else if (section == "output") {
      if (key == "dir")
        cfg.output.dir = std::string(val);
      else if (key == "format")
        cfg.output.format = std::string(val);
      else
        throw ConfigError("unknown key " + where);
    } else {
      throw ConfigError("key outside any section at line " +
                        std::to_string(lineno));
    }
  }
  if (saw_volumes) cfg.volumes = vols;
  if (saw_foliation) cfg.foliation = fol;
  if (saw_eigen) cfg.eigen = eig;
  validate_config(cfg);
  return cfg;
}

inline void validate_config(const RunConfig& cfg) {
  const std::string& fam = cfg.body.family;
  if (fam != "hyperbolic" && fam != "exp-cap" && fam != "cone" &&
      fam != "exp")
    throw ConfigError("unknown body family '" + fam + "'");
  if (cfg.body.n < 1) throw ConfigError("[body] n must be >= 1");
  if (fam == "hyperbolic" && !(cfg.body.s > 0))
    throw ConfigError("[body] s must be positive");
  if (fam == "exp-cap" && !(cfg.body.c > 0))
    throw ConfigError("[body] c must be positive");
  if ((fam == "hyperbolic" || fam == "exp-cap" || fam == "cone") &&
      !(cfg.body.a > 0))
    throw ConfigError("[body] a must be positive");
  if (cfg.volumes) {
    const auto& v = *cfg.volumes;
    if (!(v.min > 0) || !(v.max > v.min))
      throw ConfigError("[volumes] need 0 < min < max");
    if (v.points < 3)
      throw ConfigError("[volumes] need at least 3 points");
    if (v.spacing != "geometric")
      throw ConfigError("[volumes] spacing must be geometric");
  }
  if (cfg.foliation) {
    const auto& f = *cfg.foliation;
    if (f.x_min < 0 || !(f.x_max > 0) ||
        (f.x_min > 0 && !(f.x_max > f.x_min)))
      throw ConfigError("[foliation] need 0 <= x_min < x_max");
    if (f.points < 2) throw ConfigError("[foliation] need at least 2 points");
  }
  if (cfg.eigen) {
    const auto& e = *cfg.eigen;
    if (e.n < 1) throw ConfigError("[eigen] n must be >= 1");
    if (!(e.R > 0)) throw ConfigError("[eigen] R must be positive");
    if (!(e.r_min > 0) || !(e.r_max >= e.r_min))
      throw ConfigError("[eigen] need 0 < r_min <= r_max");
    if (e.r_max > 0.5 * M_PI * e.R * (1.0 + 1e-12))
      throw ConfigError("[eigen] r_max exceeds the hemisphere radius");
    if (e.points < 1) throw ConfigError("[eigen] need at least 1 point");
  }
  for (const auto& [k, t] : cfg.tolerances)
    if (!(t > 0))
      throw ConfigError("tolerance '" + k + "' must be positive");
}

// Applies one "key=value" override to the tolerance table.
inline void apply_tol_override(RunConfig& cfg, const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw ConfigError("tolerance override must be key=value: '" + spec + "'");
  const std::string key(detail::trim(std::string_view(spec).substr(0, eq)));
  auto it = cfg.tolerances.find(key);
  if (it == cfg.tolerances.end())
    throw ConfigError("unknown tolerance '" + key + "'");
  it->second = detail::parse_double(
      detail::trim(std::string_view(spec).substr(eq + 1)), "override " + key);
  if (!(it->second > 0))
    throw ConfigError("tolerance '" + key + "' must be positive");
}

// Canonical text form: fixed section and key order, full-precision numbers.
// Re-parsing the echo reproduces the config (and so the outputs) exactly.
inline std::string normalized_config(const RunConfig& cfg) {
  std::string out;
  auto kv = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  out += "[body]\n";
  kv("family", cfg.body.family);
  kv("n", std::to_string(cfg.body.n));
  if (cfg.body.family != "exp") kv("a", detail::fmt_full(cfg.body.a));
  if (cfg.body.family == "hyperbolic") kv("s", detail::fmt_full(cfg.body.s));
  if (cfg.body.family == "exp-cap") kv("c", detail::fmt_full(cfg.body.c));
  if (cfg.volumes) {
    out += "\n[volumes]\n";
    kv("min", detail::fmt_full(cfg.volumes->min));
    kv("max", detail::fmt_full(cfg.volumes->max));
    kv("points", std::to_string(cfg.volumes->points));
    kv("spacing", cfg.volumes->spacing);
  }
  if (cfg.foliation) {
    out += "\n[foliation]\n";
    kv("x_min", detail::fmt_full(cfg.foliation->x_min));
    kv("x_max", detail::fmt_full(cfg.foliation->x_max));
    kv("points", std::to_string(cfg.foliation->points));
  }
  if (cfg.eigen) {
    out += "\n[eigen]\n";
    kv("n", std::to_string(cfg.eigen->n));
    kv("R", detail::fmt_full(cfg.eigen->R));
    kv("r_min", detail::fmt_full(cfg.eigen->r_min));
    kv("r_max", detail::fmt_full(cfg.eigen->r_max));
    kv("points", std::to_string(cfg.eigen->points));
  }
  out += "\n[tolerances]\n";
  for (const auto& [k, t] : cfg.tolerances) kv(k, detail::fmt_full(t));
  out += "\n[output]\n";
  kv("dir", cfg.output.dir);
  kv("format", cfg.output.format);
  return out;
}

inline BodyOfRevolution make_body(const BodyConfig& bc) {
  GeneratingFunction f;
  if (bc.family == "hyperbolic")
    f = make_hyperbolic(bc.a, bc.s);
  else if (bc.family == "exp-cap")
    f = make_exp_cap(bc.a, bc.c);
  else if (bc.family == "cone")
    f = make_cone(bc.a);
  else if (bc.family == "exp")
    f = make_exp_counterexample();
  else
    throw ConfigError("unknown body family '" + bc.family + "'");
  return {bc.n, f};
}

}  // namespace isocone
