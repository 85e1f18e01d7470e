#pragma once

// Run configuration: an INI-style file with sections [noise], [code], [usd],
// [sweep], [output] layered over a named preset. Validation collects every
// violation instead of stopping at the first, so a hand-edited file gets one
// complete report.

#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "catbell/experiments.hpp"
#include "catbell/fock.hpp"
#include "catbell/noise.hpp"
#include "catbell/usd.hpp"

namespace catbell {

struct RunConfig {
  std::string preset = "ideal";
  NoiseModel nm;
  int m = 0;
  UsdStrategy strategy;
  double q_int = 0.0;
  double eps_trunc = kDefaultTruncationEps;

  // amplitude policy: at most one of these may be configured explicitly;
  // per-subcommand defaults fill the gap (see resolve_policy)
  std::optional<double> r_target;
  std::optional<double> fixed_alpha;

  std::optional<double> l_km;  // fixed distance for the non-distance sweeps
  double l_min = 0.0, l_max = 100.0, l_step = 1.0;
  double tc_min = 1e-5, tc_max = 1e-1;
  int tc_points_per_decade = 9;
  double alpha_min = 0.1, alpha_max = 4.0, alpha_step = 0.05;
  double s_margin = 0.01;      // violation threshold is S > 2 + s_margin
  double probe_max_km = 400.0;

  std::string out_dir = ".";
  std::string prefix;          // empty: use the subcommand name
  int threads = 1;
  unsigned long long seed = 0;  // reserved; the pipeline is deterministic
};

inline RunConfig preset_config(const std::string& name) {
  RunConfig cfg;
  cfg.preset = name;
  if (name == "ideal") {
    cfg.nm = ideal_noise();
  } else if (name == "table1") {
    cfg.nm = table1_noise();
  } else if (name == "table1-altdc") {
    cfg.nm = table1_altdc_noise();
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return cfg;
}

namespace detail {

inline std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

inline bool parse_double(const std::string& s, double& out) {
  const std::string v = unquote(s);
  if (v == "inf" || v == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  try {
    size_t used = 0;
    out = std::stod(v, &used);
    return used == v.size();
  } catch (...) {
    return false;
  }
}

inline bool parse_int(const std::string& s, long long& out) {
  try {
    size_t used = 0;
    out = std::stoll(unquote(s), &used);
    return used == unquote(s).size();
  } catch (...) {
    return false;
  }
}

struct IniEntry {
  std::string section, key, value;
  int line = 0;
};

}  // namespace detail

struct ConfigParse {
  RunConfig config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

// Parses and validates configuration text over a base (usually a preset).
// A `preset` key in the leading section-less region re-bases everything;
// explicit keys then override preset values in file order.
inline ConfigParse parse_config(const std::string& text, const RunConfig& base) {
  ConfigParse out;
  out.config = base;
  RunConfig& cfg = out.config;
  auto err = [&](const std::string& msg) { out.errors.push_back(msg); };

  // --- tokenize ---------------------------------------------------------
  std::vector<detail::IniEntry> entries;
  {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const size_t cut = line.find_first_of("#;");
      if (cut != std::string::npos) line.resize(cut);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          err("line " + std::to_string(lineno) + ": malformed section header");
          continue;
        }
        section = detail::trim(line.substr(1, line.size() - 2));
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        err("line " + std::to_string(lineno) + ": expected key = value");
        continue;
      }
      entries.push_back({section, detail::trim(line.substr(0, eq)),
                         detail::trim(line.substr(eq + 1)), lineno});
    }
  }

  // --- preset first, regardless of position among the global keys --------
  for (const auto& e : entries) {
    if (!e.section.empty() || e.key != "preset") continue;
    const std::string name = detail::unquote(e.value);
    try {
      RunConfig p = preset_config(name);
      p.out_dir = cfg.out_dir;
      p.prefix = cfg.prefix;
      p.threads = cfg.threads;
      cfg = p;
    } catch (const std::exception& ex) {
      err(std::string("preset: ") + ex.what());
    }
  }

  // --- typed setters ------------------------------------------------------
  auto set_double = [&](const detail::IniEntry& e, double lo, double hi,
                        bool lo_open, double& slot, bool inf_ok = false) {
    double v;
    if (!detail::parse_double(e.value, v)) {
      err(e.section + "." + e.key + ": cannot parse '" + e.value + "' as a number");
      return;
    }
    if (std::isinf(v) && inf_ok && v > 0) {
      slot = v;
      return;
    }
    const bool above = lo_open ? v > lo : v >= lo;
    if (!(above && v <= hi) || std::isnan(v)) {
      std::ostringstream msg;
      msg << e.section << "." << e.key << ": value " << e.value
          << " out of range " << (lo_open ? "(" : "[") << lo << ", " << hi << "]";
      err(msg.str());
      return;
    }
    slot = v;
  };
  auto set_opt_double = [&](const detail::IniEntry& e, double lo, double hi,
                            bool lo_open, std::optional<double>& slot) {
    double v = 0;
    const size_t before = out.errors.size();
    set_double(e, lo, hi, lo_open, v);
    if (out.errors.size() == before) slot = v;
  };
  auto set_reflections = [&](const detail::IniEntry& e, int& slot) {
    if (detail::unquote(e.value) == "auto") {
      slot = kAutoReflections;
      return;
    }
    long long v;
    if (!detail::parse_int(e.value, v) || v < 0 || v > 64) {
      err(e.section + "." + e.key + ": expected 'auto' or an integer in [0, 64]");
      return;
    }
    slot = static_cast<int>(v);
  };

  const double inf = std::numeric_limits<double>::infinity();

  for (const auto& e : entries) {
    if (e.section.empty()) {
      if (e.key == "preset") continue;  // handled above
      err("unknown key '" + e.key + "' outside any section");
    } else if (e.section == "noise") {
      if (e.key == "eta_int") set_double(e, 0, 1, false, cfg.nm.eta_int);
      else if (e.key == "eta_dc") set_double(e, 0, 1, false, cfg.nm.eta_dc);
      else if (e.key == "eta_uc") set_double(e, 0, 1, false, cfg.nm.eta_uc);
      else if (e.key == "eta_d") set_double(e, 0, 1, false, cfg.nm.eta_d);
      else if (e.key == "gamma_db_per_km") set_double(e, 0, 10, false, cfg.nm.gamma_db_per_km);
      else if (e.key == "t_c") set_double(e, 0, inf, true, cfg.nm.t_c, true);
      else if (e.key == "t_0") set_double(e, 0, 1, true, cfg.nm.t_0);
      else if (e.key == "t_proc") set_double(e, 0, 1, false, cfg.nm.t_proc);
      else if (e.key == "alice_reflections") set_reflections(e, cfg.nm.alice_reflections);
      else if (e.key == "bob_syndrome_reflections") set_reflections(e, cfg.nm.bob_syndrome_reflections);
      else if (e.key == "bob_entangle_reflections") set_reflections(e, cfg.nm.bob_entangle_reflections);
      else if (e.key == "q_int") set_double(e, 0, 0.5, false, cfg.q_int);
      else err("unknown key 'noise." + e.key + "'");
    } else if (e.section == "code") {
      if (e.key == "m") {
        long long v;
        if (!detail::parse_int(e.value, v) || v < 0 || v > 2)
          err("code.m: must be 0, 1, or 2");
        else
          cfg.m = static_cast<int>(v);
      } else if (e.key == "eps_trunc") {
        set_double(e, 0, 1e-3, true, cfg.eps_trunc);
      } else {
        err("unknown key 'code." + e.key + "'");
      }
    } else if (e.section == "usd") {
      if (e.key == "strategy") {
        const std::string v = detail::unquote(e.value);
        if (v == "tub") cfg.strategy.kind = UsdKind::kTheoreticalUpperBound;
        else if (v == "bs0") cfg.strategy.kind = UsdKind::kBeamsplitter0Loss;
        else if (v == "surrogate") cfg.strategy.kind = UsdKind::kSurrogateScaled;
        else err("usd.strategy: expected one of tub, bs0, surrogate");
      } else if (e.key == "kappa") {
        set_double(e, 0, 1, true, cfg.strategy.kappa);
      } else {
        err("unknown key 'usd." + e.key + "'");
      }
    } else if (e.section == "sweep") {
      if (e.key == "r_target") set_opt_double(e, 0, 1e12, true, cfg.r_target);
      else if (e.key == "fixed_alpha") set_opt_double(e, 0, 8, true, cfg.fixed_alpha);
      else if (e.key == "l_km") set_opt_double(e, 0, 1e4, false, cfg.l_km);
      else if (e.key == "l_min") set_double(e, 0, 1e4, false, cfg.l_min);
      else if (e.key == "l_max") set_double(e, 0, 1e4, false, cfg.l_max);
      else if (e.key == "l_step") set_double(e, 0, 1e4, true, cfg.l_step);
      else if (e.key == "tc_min") set_double(e, 0, 1e3, true, cfg.tc_min);
      else if (e.key == "tc_max") set_double(e, 0, 1e3, true, cfg.tc_max);
      else if (e.key == "tc_points_per_decade") {
        long long v;
        if (!detail::parse_int(e.value, v) || v < 1 || v > 1000)
          err("sweep.tc_points_per_decade: expected an integer in [1, 1000]");
        else
          cfg.tc_points_per_decade = static_cast<int>(v);
      }
      else if (e.key == "alpha_min") set_double(e, 0, 8, true, cfg.alpha_min);
      else if (e.key == "alpha_max") set_double(e, 0, 8, true, cfg.alpha_max);
      else if (e.key == "alpha_step") set_double(e, 0, 8, true, cfg.alpha_step);
      else if (e.key == "s_margin") set_double(e, 0, 0.8, false, cfg.s_margin);
      else if (e.key == "probe_max_km") set_double(e, 0, 1e4, true, cfg.probe_max_km);
      else err("unknown key 'sweep." + e.key + "'");
    } else if (e.section == "output") {
      if (e.key == "dir") cfg.out_dir = detail::unquote(e.value);
      else if (e.key == "prefix") cfg.prefix = detail::unquote(e.value);
      else if (e.key == "threads") {
        long long v;
        if (!detail::parse_int(e.value, v) || v < 1 || v > 1024)
          err("output.threads: expected an integer in [1, 1024]");
        else
          cfg.threads = static_cast<int>(v);
      } else {
        err("unknown key 'output." + e.key + "'");
      }
    } else {
      err("unknown section '[" + e.section + "]'");
    }
  }

  // --- cross-field checks -------------------------------------------------
  if (cfg.r_target && cfg.fixed_alpha)
    err("sweep: r_target and fixed_alpha are mutually exclusive amplitude policies");
  if (cfg.strategy.kind == UsdKind::kBeamsplitter0Loss && cfg.m != 0)
    err("usd.strategy: bs0 requires the single-component code (code.m = 0)");
  if (cfg.strategy.kind != UsdKind::kSurrogateScaled && cfg.strategy.kappa != 1.0)
    err("usd.kappa: only meaningful with usd.strategy = surrogate");
  if (cfg.l_max < cfg.l_min) err("sweep: l_max must be >= l_min");
  if (cfg.tc_max < cfg.tc_min) err("sweep: tc_max must be >= tc_min");
  if (cfg.alpha_max < cfg.alpha_min) err("sweep: alpha_max must be >= alpha_min");
  return out;
}

// Per-subcommand amplitude-policy defaults: distance and violation-range
// sweeps re-solve the amplitude against a rate target (3000 Hz and 3 Hz);
// the coherence sweep defaults to a fixed amplitude of 1.5.
inline AlphaPolicy resolve_policy(const RunConfig& cfg, const std::string& subcommand) {
  AlphaPolicy p;
  if (cfg.fixed_alpha) {
    p.mode = AlphaPolicy::Mode::kFixedAlpha;
    p.fixed_alpha = *cfg.fixed_alpha;
    return p;
  }
  if (cfg.r_target) {
    p.mode = AlphaPolicy::Mode::kRateConstrained;
    p.r_target = *cfg.r_target;
    return p;
  }
  if (subcommand == "sweep-coherence") {
    p.mode = AlphaPolicy::Mode::kFixedAlpha;
    p.fixed_alpha = 1.5;
  } else if (subcommand == "violation-range") {
    p.mode = AlphaPolicy::Mode::kRateConstrained;
    p.r_target = 3.0;
  } else {
    p.mode = AlphaPolicy::Mode::kRateConstrained;
    p.r_target = 3000.0;
  }
  return p;
}

inline std::vector<double> distance_grid(const RunConfig& cfg) {
  std::vector<double> g;
  for (double l = cfg.l_min; l <= cfg.l_max + 1e-9; l += cfg.l_step) g.push_back(l);
  return g;
}

// Log-spaced coherence times, tc_points_per_decade per decade, with an
// infinite-coherence anchor appended.
inline std::vector<double> coherence_grid(const RunConfig& cfg) {
  std::vector<double> g;
  const double lg0 = std::log10(cfg.tc_min);
  for (int i = 0;; ++i) {
    const double t = std::pow(10.0, lg0 + double(i) / cfg.tc_points_per_decade);
    if (t > cfg.tc_max * (1.0 + 1e-9)) break;
    g.push_back(t);
  }
  g.push_back(std::numeric_limits<double>::infinity());
  return g;
}

inline std::vector<double> alpha_grid(const RunConfig& cfg) {
  std::vector<double> g;
  for (double a = cfg.alpha_min; a <= cfg.alpha_max + 1e-9; a += cfg.alpha_step)
    g.push_back(a);
  return g;
}

// Default fixed distances for the sweeps that hold L constant.
inline double resolved_l_km(const RunConfig& cfg, const std::string& subcommand) {
  if (cfg.l_km) return *cfg.l_km;
  return subcommand == "sweep-alpha-skr" ? 10.0 : 5.0;
}

inline SweepSpec make_sweep_spec(const RunConfig& cfg, const std::string& subcommand) {
  SweepSpec spec;
  spec.m = cfg.m;
  spec.nm = cfg.nm;
  spec.strategy = cfg.strategy;
  spec.q_int = cfg.q_int;
  spec.threads = cfg.threads;
  spec.policy = resolve_policy(cfg, subcommand);
  spec.fixed_l_km = resolved_l_km(cfg, subcommand);
  if (subcommand == "sweep-distance") {
    spec.variable = SweepVariable::kDistance;
    spec.grid = distance_grid(cfg);
  } else if (subcommand == "sweep-coherence") {
    spec.variable = SweepVariable::kCoherenceTime;
    spec.grid = coherence_grid(cfg);
  } else if (subcommand == "sweep-alpha-skr") {
    spec.variable = SweepVariable::kAlpha;
    spec.grid = alpha_grid(cfg);
  } else {
    throw std::invalid_argument("make_sweep_spec: unknown subcommand '" + subcommand + "'");
  }
  return spec;
}

}  // namespace catbell
