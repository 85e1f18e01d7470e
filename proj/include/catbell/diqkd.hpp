#pragma once

// Device-independent QKD key-rate arithmetic: binary entropy, the
// CHSH-certified leakage bound, entanglement-generation rate, and the
// asymptotic secret key rate.

#include <cmath>
#include <stdexcept>

#include "catbell/noise.hpp"

namespace catbell {

inline constexpr double kTsirelson = 2.8284271247461903;  // 2 sqrt(2)

// -x log2 x - (1-x) log2 (1-x), continuous at the endpoints.
inline double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("binary_entropy: argument must lie in [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

// Eavesdropper leakage certified by a CHSH value S:
// chi = h((1 + sqrt((S/2)^2 - 1)) / 2), decreasing from 1 at S = 2 to 0 at
// the Tsirelson bound. S below 2 certifies nothing: returns 1 and sets the
// flag. S above the Tsirelson bound (beyond tolerance) is rejected.
inline double chi(double s, bool* below_classical = nullptr) {
  if (below_classical) *below_classical = false;
  if (s > kTsirelson + 1e-9)
    throw std::domain_error("chi: S exceeds the quantum bound");
  if (s < 2.0) {
    if (below_classical) *below_classical = true;
    return 1.0;
  }
  const double half = std::min(s, kTsirelson) / 2.0;
  return binary_entropy((1.0 + std::sqrt(half * half - 1.0)) / 2.0);
}

// Successful heralded pairs per second: P / max(L/c_f, t_0).
inline double entanglement_rate(double p_success, double l_km, double t_0) {
  if (!(p_success >= 0.0 && p_success <= 1.0))
    throw std::domain_error("entanglement_rate: P must lie in [0,1]");
  if (l_km < 0.0) throw std::domain_error("entanglement_rate: L must be >= 0");
  if (!(t_0 > 0.0)) throw std::domain_error("entanglement_rate: t_0 must be positive");
  return p_success / std::max(l_km * 1000.0 / kFiberLightSpeed, t_0);
}

struct KeyRateInput {
  double s = 2.0;      // CHSH value
  double q = 0.0;      // quantum bit error rate in the key basis
  double r_eg = 0.0;   // entanglement-generation rate, Hz
};

struct KeyRateResult {
  double skr = 0.0;           // clamped secret key rate, bits/s
  double raw = 0.0;           // unclamped R_eg (1 - h(Q) - chi(S))
  bool below_classical = false;  // S < 2: leakage bound saturated at 1
};

// Asymptotic DI-QKD secret key rate R_eg (1 - h(Q) - chi(S)), clamped at 0.
inline KeyRateResult secret_key_rate(const KeyRateInput& in) {
  if (!(in.q >= 0.0 && in.q <= 0.5))
    throw std::domain_error("secret_key_rate: Q must lie in [0, 1/2]");
  if (in.r_eg < 0.0)
    throw std::domain_error("secret_key_rate: R_eg must be >= 0");
  KeyRateResult out;
  const double leak = chi(in.s, &out.below_classical);
  out.raw = in.r_eg * (1.0 - binary_entropy(in.q) - leak);
  out.skr = std::max(0.0, out.raw);
  return out;
}

}  // namespace catbell
