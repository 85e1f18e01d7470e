#pragma once

// Serialization of sweep results: a fixed-schema CSV for the series, JSON
// for the summary scalars and the resolved-configuration metadata that makes
// a run reproducible. All writes go through a temp-file-then-rename step so
// readers never observe a half-written file.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "catbell/config.hpp"
#include "catbell/experiments.hpp"
#include "catbell/version.hpp"

namespace catbell {

inline constexpr const char* kCsvHeader = "x,alpha_used,F,P,R_eg,S,skr,status";

// 12 significant digits, compact form; nan and inf print as such.
inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_line(const SweepRow& row) {
  return fmt12(row.x) + "," + fmt12(row.alpha_used) + "," + fmt12(row.f) + "," +
         fmt12(row.p) + "," + fmt12(row.r_eg) + "," + fmt12(row.s) + "," +
         fmt12(row.skr) + "," + row.status;
}

inline std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += csv_line(r);
    out += '\n';
  }
  return out;
}

// Write-temp-then-rename; the rename is atomic on POSIX filesystems.
inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace detail {

// JSON has no inf/nan literals; keep them readable and round-trippable.
inline nlohmann::ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline const char* usd_kind_name(UsdKind k) {
  switch (k) {
    case UsdKind::kTheoreticalUpperBound: return "tub";
    case UsdKind::kBeamsplitter0Loss: return "bs0";
    case UsdKind::kSurrogateScaled: return "surrogate";
  }
  return "?";
}

}  // namespace detail

// Full resolved configuration: enough to reproduce the run bit-for-bit.
inline nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["preset"] = cfg.preset;
  nlohmann::ordered_json noise;
  noise["eta_int"] = cfg.nm.eta_int;
  noise["eta_dc"] = cfg.nm.eta_dc;
  noise["eta_uc"] = cfg.nm.eta_uc;
  noise["eta_d"] = cfg.nm.eta_d;
  noise["gamma_db_per_km"] = cfg.nm.gamma_db_per_km;
  noise["t_c"] = detail::json_number(cfg.nm.t_c);
  noise["t_0"] = cfg.nm.t_0;
  noise["t_proc"] = cfg.nm.t_proc;
  auto refl = [](int r) -> nlohmann::ordered_json {
    if (r == kAutoReflections) return "auto";
    return r;
  };
  noise["alice_reflections"] = refl(cfg.nm.alice_reflections);
  noise["bob_syndrome_reflections"] = refl(cfg.nm.bob_syndrome_reflections);
  noise["bob_entangle_reflections"] = refl(cfg.nm.bob_entangle_reflections);
  noise["q_int"] = cfg.q_int;
  j["noise"] = noise;
  nlohmann::ordered_json code;
  code["m"] = cfg.m;
  code["eps_trunc"] = cfg.eps_trunc;
  j["code"] = code;
  nlohmann::ordered_json usd;
  usd["strategy"] = detail::usd_kind_name(cfg.strategy.kind);
  usd["kappa"] = cfg.strategy.kappa;
  j["usd"] = usd;
  nlohmann::ordered_json sweep;
  if (cfg.r_target) sweep["r_target"] = *cfg.r_target;
  if (cfg.fixed_alpha) sweep["fixed_alpha"] = *cfg.fixed_alpha;
  if (cfg.l_km) sweep["l_km"] = *cfg.l_km;
  sweep["l_min"] = cfg.l_min;
  sweep["l_max"] = cfg.l_max;
  sweep["l_step"] = cfg.l_step;
  sweep["tc_min"] = cfg.tc_min;
  sweep["tc_max"] = cfg.tc_max;
  sweep["tc_points_per_decade"] = cfg.tc_points_per_decade;
  sweep["alpha_min"] = cfg.alpha_min;
  sweep["alpha_max"] = cfg.alpha_max;
  sweep["alpha_step"] = cfg.alpha_step;
  sweep["s_margin"] = cfg.s_margin;
  sweep["probe_max_km"] = cfg.probe_max_km;
  j["sweep"] = sweep;
  nlohmann::ordered_json output;
  output["dir"] = cfg.out_dir;
  output["prefix"] = cfg.prefix;
  output["threads"] = cfg.threads;
  j["output"] = output;
  return j;
}

inline nlohmann::ordered_json metadata_json(const RunConfig& cfg,
                                            const std::string& subcommand) {
  nlohmann::ordered_json j;
  j["tool"] = "catbell";
  j["version"] = kVersion;
  j["subcommand"] = subcommand;
  j["config"] = config_to_json(cfg);
  nlohmann::ordered_json tol;
  tol["eps_trunc"] = cfg.eps_trunc;
  tol["alpha_solver"] = 1e-6;
  tol["crossing_km"] = 0.1;
  j["tolerances"] = tol;
  j["notes"] = nlohmann::ordered_json::array(
      {"t_0 and gamma_db_per_km are model choices; crossing distances and "
       "key rates shift with them",
       "seed is reserved; the pipeline is deterministic"});
  return j;
}

inline nlohmann::ordered_json summary_json(const SweepSummary& s) {
  nlohmann::ordered_json j;
  j["max_S"] = detail::json_number(s.max_s);
  j["argmax_x"] = detail::json_number(s.argmax_x);
  j["max_skr"] = detail::json_number(s.max_skr);
  j["argmax_alpha"] = detail::json_number(s.argmax_alpha);
  j["crossing_km"] = detail::json_number(s.crossing_km);
  j["saturation_tc"] = detail::json_number(s.saturation_tc);
  j["no_violation"] = s.no_violation;
  j["hit_probe_cap"] = s.hit_probe_cap;
  return j;
}

// Emit the standard artifact trio for one run.
inline void write_run_artifacts(const std::filesystem::path& dir,
                                const std::string& prefix,
                                const std::vector<SweepRow>& rows,
                                const SweepSummary& summary,
                                const RunConfig& cfg,
                                const std::string& subcommand) {
  std::filesystem::create_directories(dir);
  atomic_write_file(dir / (prefix + ".csv"), rows_to_csv(rows));
  atomic_write_file(dir / (prefix + ".summary.json"),
                    summary_json(summary).dump(2) + "\n");
  atomic_write_file(dir / (prefix + ".meta.json"),
                    metadata_json(cfg, subcommand).dump(2) + "\n");
}

}  // namespace catbell
