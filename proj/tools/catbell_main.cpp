// catbell: simulator and rate calculator for cat-code entanglement
// distribution over lossy fiber, with CHSH and device-independent key-rate
// outputs. Subcommands run parameter sweeps and emit CSV + JSON artifacts.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "catbell/config.hpp"
#include "catbell/experiments.hpp"
#include "catbell/io.hpp"
#include "catbell/validate.hpp"
#include "catbell/version.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  int threads = 0;
  unsigned long long seed = 0;
  bool seed_given = false;
};

void add_common_flags(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("--config", opt.config_path, "configuration file (INI sections)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--preset", opt.preset, "parameter preset")
      ->check(CLI::IsMember({"ideal", "table1", "table1-altdc"}));
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--threads", opt.threads, "worker threads for sweep rows")
      ->check(CLI::Range(1, 1024));
  cmd->add_option("--seed", opt.seed, "reserved; the pipeline is deterministic")
      ->each([&opt](const std::string&) { opt.seed_given = true; });
}

void print_error(const std::string& kind, const std::string& msg) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = msg;
  std::cerr << j.dump() << "\n";
}

// defaults -> --preset -> config file (a preset key there re-bases) -> flags
catbell::RunConfig resolve_config(const CliOptions& opt, int& exit_code) {
  exit_code = 0;
  catbell::RunConfig cfg;
  try {
    cfg = catbell::preset_config(opt.preset.empty() ? "ideal" : opt.preset);
  } catch (const std::exception& ex) {
    print_error("config", ex.what());
    exit_code = 2;
    return cfg;
  }
  if (!opt.config_path.empty()) {
    std::ifstream f(opt.config_path);
    if (!f) {
      print_error("config", "cannot read " + opt.config_path);
      exit_code = 2;
      return cfg;
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    const catbell::ConfigParse parsed = catbell::parse_config(buf.str(), cfg);
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors) print_error("config", e);
      exit_code = 2;
      return cfg;
    }
    cfg = parsed.config;
  }
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (opt.threads > 0) cfg.threads = opt.threads;
  if (opt.seed_given) cfg.seed = opt.seed;
  return cfg;
}

int run_sweep(const std::string& name, const catbell::RunConfig& cfg) {
  using namespace catbell;
  const SweepSpec spec = make_sweep_spec(cfg, name);
  std::vector<SweepRow> rows;
  SweepSummary summary;
  if (name == "sweep-distance") {
    rows = sweep_distance(spec);
    for (const auto& r : rows)
      if (r.status == "ok" && !(summary.max_s >= r.s)) {
        summary.max_s = r.s;
        summary.argmax_x = r.x;
      }
    for (const auto& r : rows)
      if (r.status == "ok" && !(summary.max_skr >= r.skr)) {
        summary.max_skr = r.skr;
        summary.argmax_alpha = r.alpha_used;
      }
  } else if (name == "sweep-coherence") {
    rows = sweep_coherence(spec, &summary);
  } else {
    rows = sweep_alpha_skr(spec, &summary);
  }
  const std::string prefix = cfg.prefix.empty() ? name : cfg.prefix;
  write_run_artifacts(cfg.out_dir, prefix, rows, summary, cfg, name);
  std::cout << "wrote " << (std::filesystem::path(cfg.out_dir) / (prefix + ".csv")).string()
            << " (" << rows.size() << " rows)\n";
  return 0;
}

int run_violation_range(const catbell::RunConfig& cfg) {
  using namespace catbell;
  const AlphaPolicy policy = resolve_policy(cfg, "violation-range");
  const ViolationRangeResult res =
      violation_range(cfg.m, cfg.nm, cfg.strategy, policy, cfg.s_margin,
                      cfg.probe_max_km, cfg.q_int);
  SweepSummary summary;
  summary.crossing_km = res.crossing_km;
  summary.no_violation = res.no_violation;
  summary.hit_probe_cap = res.hit_probe_cap;

  // probe curve alongside the scalar result: rows every 10 km up to the
  // crossing (or the probe cap)
  SweepSpec spec;
  spec.variable = SweepVariable::kDistance;
  spec.m = cfg.m;
  spec.nm = cfg.nm;
  spec.strategy = cfg.strategy;
  spec.policy = policy;
  spec.q_int = cfg.q_int;
  spec.threads = cfg.threads;
  for (double l = 0.0; l <= res.crossing_km + 10.0 && l <= cfg.probe_max_km;
       l += 10.0)
    spec.grid.push_back(l);
  std::vector<SweepRow> rows = sweep_distance(spec);
  for (auto& r : rows)
    if (r.status == "ok" && r.s <= 2.0 + cfg.s_margin) r.status = "no-violation";

  const std::string prefix = cfg.prefix.empty() ? "violation-range" : cfg.prefix;
  write_run_artifacts(cfg.out_dir, prefix, rows, summary, cfg, "violation-range");
  if (res.no_violation)
    std::cout << "no violation at L = 0\n";
  else if (res.hit_probe_cap)
    std::cout << "still violating at the probe cap (" << cfg.probe_max_km << " km)\n";
  else
    std::cout << "S = 2 + " << cfg.s_margin << " crossing at "
              << catbell::fmt12(res.crossing_km) << " km\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cat-code entanglement distribution: Bell-test and DI-QKD rates"};
  app.set_version_flag("--version", catbell::kVersion);
  app.require_subcommand(1);

  CliOptions opt;
  CLI::App* cmds[] = {
      app.add_subcommand("sweep-distance",
                         "CHSH and key rate vs distance at a target generation rate"),
      app.add_subcommand("sweep-coherence",
                         "CHSH vs memory coherence time at fixed distance"),
      app.add_subcommand("sweep-alpha-skr",
                         "secret key rate vs field amplitude at fixed distance"),
      app.add_subcommand("violation-range",
                         "distance where the Bell violation dies out"),
      app.add_subcommand("validate",
                         "run the consistency suite and report residuals"),
  };
  for (CLI::App* c : cmds) add_common_flags(c, opt);

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();

  int exit_code = 0;
  const catbell::RunConfig cfg = resolve_config(opt, exit_code);
  if (exit_code != 0) return exit_code;

  try {
    if (name == "validate")
      return catbell::print_validation(std::cout) ? 0 : 1;
    if (name == "violation-range") return run_violation_range(cfg);
    return run_sweep(name, cfg);
  } catch (const std::invalid_argument& ex) {
    print_error("config", ex.what());
    return 2;
  } catch (const std::domain_error& ex) {
    print_error("config", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    print_error("runtime", ex.what());
    return 1;
  }
}
