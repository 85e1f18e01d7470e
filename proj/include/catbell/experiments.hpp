#pragma once

// Parameter studies built on the protocol pipeline: distance sweeps at a
// target generation rate, coherence-time sweeps, key-rate-vs-amplitude
// sweeps, and the solver locating where the Bell violation dies out.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "catbell/bell.hpp"
#include "catbell/diqkd.hpp"
#include "catbell/noise.hpp"
#include "catbell/protocol.hpp"
#include "catbell/usd.hpp"

namespace catbell {

struct UnreachableRate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Success probability needed per attempt to sustain r_target heralded pairs
// per second at distance l_km.
inline double required_success_prob(double r_target, double l_km, double t_0) {
  if (!(r_target > 0.0))
    throw std::domain_error("required_success_prob: target rate must be positive");
  if (l_km < 0.0) throw std::domain_error("required_success_prob: L must be >= 0");
  if (!(t_0 > 0.0)) throw std::domain_error("required_success_prob: t_0 must be positive");
  const double p = r_target * std::max(l_km * 1000.0 / kFiberLightSpeed, t_0);
  if (p > 1.0)
    throw UnreachableRate("required success probability " + std::to_string(p) +
                          " exceeds 1 at L = " + std::to_string(l_km) + " km");
  return p;
}

namespace detail {

inline constexpr double kAlphaScanMax = 4.0;
inline constexpr double kAlphaScanStep = 0.05;

// index-parallel loop; work granularity is one grid point
inline void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

// Smallest amplitude whose success probability reaches p_req: a coarse
// forward scan finds the first crossing (robust to the non-monotone tail the
// multi-component codes develop at large amplitude), then bisection narrows
// the bracket to 1e-6.
inline double solve_alpha_for_rate(double p_req, int m, double l_km,
                                   const NoiseModel& nm,
                                   const UsdStrategy& strategy) {
  if (!(p_req > 0.0 && p_req < 1.0))
    throw std::domain_error("solve_alpha_for_rate: p_req must lie in (0,1)");
  auto p_of = [&](double a) {
    return run_protocol(m, Complex(a, 0.0), l_km, nm, strategy).p_success;
  };
  double lo = 0.0;  // P(0) = 0 by definition; never evaluated
  double hi = -1.0;
  for (double a = detail::kAlphaScanStep; a <= detail::kAlphaScanMax + 1e-12;
       a += detail::kAlphaScanStep) {
    if (p_of(a) >= p_req) {
      hi = a;
      break;
    }
    lo = a;
  }
  if (hi < 0.0)
    throw UnreachableRate(
        "solve_alpha_for_rate: no amplitude up to " +
        std::to_string(detail::kAlphaScanMax) + " reaches P = " + std::to_string(p_req));
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (p_of(mid) >= p_req ? hi : lo) = mid;
  }
  return hi;  // P(hi) >= p_req by construction
}

enum class SweepVariable { kDistance, kCoherenceTime, kAlpha };

struct AlphaPolicy {
  enum class Mode { kRateConstrained, kFixedAlpha };
  Mode mode = Mode::kRateConstrained;
  double r_target = 3000.0;  // Hz, used by kRateConstrained
  double fixed_alpha = 1.5;  // used by kFixedAlpha
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::kDistance;
  std::vector<double> grid;  // strictly increasing, non-empty
  int m = 0;
  NoiseModel nm;
  AlphaPolicy policy;
  UsdStrategy strategy;
  double fixed_l_km = 5.0;  // distance for the non-distance sweeps
  double q_int = 0.0;       // additive intrinsic QBER
  int threads = 1;
};

struct SweepRow {
  double x = 0.0;
  double alpha_used = std::numeric_limits<double>::quiet_NaN();
  double f = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double r_eg = std::numeric_limits<double>::quiet_NaN();
  double s = std::numeric_limits<double>::quiet_NaN();
  double skr = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

struct SweepSummary {
  double max_s = std::numeric_limits<double>::quiet_NaN();
  double argmax_x = std::numeric_limits<double>::quiet_NaN();
  double max_skr = std::numeric_limits<double>::quiet_NaN();
  double argmax_alpha = std::numeric_limits<double>::quiet_NaN();
  double crossing_km = std::numeric_limits<double>::quiet_NaN();
  double saturation_tc = std::numeric_limits<double>::quiet_NaN();
  bool no_violation = false;
  bool hit_probe_cap = false;
};

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must be non-empty");
  for (size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("sweep: grid must be strictly increasing");
}

// Shared row assembly once the protocol has run.
inline void finish_row(SweepRow& row, double alpha, const ProtocolOutcome& pr,
                       double q_int) {
  row.alpha_used = alpha;
  row.f = pr.fidelity;
  row.p = pr.p_success;
  row.r_eg = pr.rate;
  row.s = s_max(pr.fidelity);
  const double q = std::min(0.5, q_int + qber_zz(pr.rho_ab));
  row.skr = secret_key_rate({row.s, q, row.r_eg}).skr;
}

}  // namespace detail

// One row per distance; the amplitude is re-solved per row under the
// rate-constrained policy. Unreachable targets yield flagged rows.
inline std::vector<SweepRow> sweep_distance(const SweepSpec& spec) {
  detail::check_grid(spec.grid);
  std::vector<SweepRow> rows(spec.grid.size());
  detail::parallel_for(
      static_cast<int>(spec.grid.size()), spec.threads, [&](int i) {
        SweepRow& row = rows[i];
        const double l = spec.grid[i];
        row.x = l;
        try {
          double alpha;
          if (spec.policy.mode == AlphaPolicy::Mode::kRateConstrained) {
            const double p_req =
                required_success_prob(spec.policy.r_target, l, spec.nm.t_0);
            alpha = solve_alpha_for_rate(p_req, spec.m, l, spec.nm, spec.strategy);
          } else {
            alpha = spec.policy.fixed_alpha;
          }
          const ProtocolOutcome pr =
              run_protocol(spec.m, Complex(alpha, 0.0), l, spec.nm, spec.strategy);
          detail::finish_row(row, alpha, pr, spec.q_int);
        } catch (const UnreachableRate&) {
          row.status = "unreachable-rate";
        }
      });
  return rows;
}

// Rows over the memory coherence time at a fixed distance. Only the
// dephasing depends on t_c, so the light-mode simulation runs once.
inline std::vector<SweepRow> sweep_coherence(const SweepSpec& spec,
                                             SweepSummary* summary = nullptr) {
  detail::check_grid(spec.grid);
  const double l = spec.fixed_l_km;
  double alpha;
  if (spec.policy.mode == AlphaPolicy::Mode::kRateConstrained) {
    const double p_req = required_success_prob(spec.policy.r_target, l, spec.nm.t_0);
    alpha = solve_alpha_for_rate(p_req, spec.m, l, spec.nm, spec.strategy);
  } else {
    alpha = spec.policy.fixed_alpha;
  }
  NoiseModel base = spec.nm;
  base.t_c = std::numeric_limits<double>::infinity();
  const ProtocolOutcome undephased =
      run_protocol(spec.m, Complex(alpha, 0.0), l, base, spec.strategy);
  const double t = storage_time(l, spec.nm);

  std::vector<SweepRow> rows(spec.grid.size());
  for (size_t i = 0; i < spec.grid.size(); ++i) {
    SweepRow& row = rows[i];
    const double tc = spec.grid[i];
    row.x = tc;
    ProtocolOutcome pr = undephased;
    const double factor = std::isinf(tc) ? 1.0 : std::exp(-t / tc);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        if ((r < 2) != (c < 2)) pr.rho_ab(r, c) *= factor;
    pr.fidelity = dephase_fidelity(undephased.fidelity, t, tc);
    detail::finish_row(row, alpha, pr, spec.q_int);
  }

  if (summary) {
    summary->max_s = rows.back().s;
    summary->argmax_x = rows.back().x;
    // saturation: first grid point whose gain over the following decade
    // drops below 1e-3
    for (size_t i = 0; i < rows.size(); ++i) {
      const double tc10 = rows[i].x * 10.0;
      double s10 = rows.back().s;
      for (size_t k = i + 1; k < rows.size(); ++k)
        if (rows[k].x >= tc10 * (1.0 - 1e-9)) {
          s10 = rows[k].s;
          break;
        }
      if (s10 - rows[i].s < 1e-3) {
        summary->saturation_tc = rows[i].x;
        break;
      }
    }
  }
  return rows;
}

// Rows over the amplitude grid at a fixed distance; the summary holds the
// key-rate maximizer refined by golden-section search between the best grid
// point's neighbors.
inline std::vector<SweepRow> sweep_alpha_skr(const SweepSpec& spec,
                                             SweepSummary* summary = nullptr) {
  detail::check_grid(spec.grid);
  const double l = spec.fixed_l_km;
  auto eval = [&](double alpha, SweepRow& row) {
    row.x = alpha;
    const ProtocolOutcome pr =
        run_protocol(spec.m, Complex(alpha, 0.0), l, spec.nm, spec.strategy);
    detail::finish_row(row, alpha, pr, spec.q_int);
  };
  std::vector<SweepRow> rows(spec.grid.size());
  detail::parallel_for(static_cast<int>(spec.grid.size()), spec.threads,
                       [&](int i) { eval(spec.grid[i], rows[i]); });

  if (summary) {
    size_t best = 0;
    for (size_t i = 1; i < rows.size(); ++i)
      if (rows[i].skr > rows[best].skr) best = i;
    double lo = spec.grid[best > 0 ? best - 1 : best];
    double hi = spec.grid[best + 1 < spec.grid.size() ? best + 1 : best];
    auto skr_at = [&](double a) {
      SweepRow r;
      eval(a, r);
      return r.skr;
    };
    // golden-section refinement of the interior maximum
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = skr_at(x1), f2 = skr_at(x2);
    while (hi - lo > 1e-4) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = skr_at(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = skr_at(x1);
      }
    }
    const double a_star = 0.5 * (lo + hi);
    const double s_star = skr_at(a_star);
    if (s_star >= rows[best].skr) {
      summary->argmax_alpha = a_star;
      summary->max_skr = s_star;
    } else {
      summary->argmax_alpha = rows[best].x;
      summary->max_skr = rows[best].skr;
    }
    summary->max_s = rows[best].s;
    summary->argmax_x = rows[best].x;
  }
  return rows;
}

struct ViolationRangeResult {
  double crossing_km = 0.0;
  bool no_violation = false;  // already non-violating at L = 0
  bool hit_probe_cap = false; // still violating at the probe limit
};

// Distance where the CHSH value falls back to the classical bound (plus the
// configured margin). The amplitude follows the given policy per distance;
// an unreachable rate target counts as non-violating.
inline ViolationRangeResult violation_range(int m, const NoiseModel& nm,
                                            const UsdStrategy& strategy,
                                            const AlphaPolicy& policy,
                                            double s_margin = 0.01,
                                            double probe_max_km = 400.0,
                                            double q_int = 0.0) {
  (void)q_int;
  auto s_at = [&](double l) -> std::optional<double> {
    try {
      double alpha;
      if (policy.mode == AlphaPolicy::Mode::kRateConstrained) {
        const double p_req = required_success_prob(policy.r_target, l, nm.t_0);
        alpha = solve_alpha_for_rate(p_req, m, l, nm, strategy);
      } else {
        alpha = policy.fixed_alpha;
      }
      return s_max(run_protocol(m, Complex(alpha, 0.0), l, nm, strategy).fidelity);
    } catch (const UnreachableRate&) {
      return std::nullopt;
    }
  };
  const double threshold = 2.0 + s_margin;
  auto violating = [&](double l) {
    const auto s = s_at(l);
    return s.has_value() && *s > threshold;
  };

  ViolationRangeResult out;
  if (!violating(0.0)) {
    out.no_violation = true;
    return out;
  }
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (double l = 10.0; l <= probe_max_km + 1e-9; l += 10.0) {
    if (!violating(l)) {
      hi = l;
      bracketed = true;
      break;
    }
    lo = l;
  }
  if (!bracketed) {
    out.crossing_km = probe_max_km;
    out.hit_probe_cap = true;
    return out;
  }
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    (violating(mid) ? lo : hi) = mid;
  }
  out.crossing_km = 0.5 * (lo + hi);
  return out;
}

}  // namespace catbell
