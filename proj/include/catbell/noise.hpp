#pragma once

// Hardware-inefficiency bookkeeping: per-reflection interaction efficiency,
// frequency-conversion and detector efficiencies, fiber attenuation, and
// memory dephasing during the classical-signaling wait.

#include <cmath>
#include <limits>
#include <stdexcept>

namespace catbell {

// Speed of light in optical fiber, m/s.
inline constexpr double kFiberLightSpeed = 2.0e8;

// Sentinel: derive a reflection count from the code index m instead of
// using an explicit override.
inline constexpr int kAutoReflections = -1;

struct NoiseModel {
  double eta_int = 1.0;  // light-matter interaction efficiency, per reflection
  double eta_dc = 1.0;   // down-conversion (optical -> telecom)
  double eta_uc = 1.0;   // up-conversion (telecom -> optical)
  double eta_d = 1.0;    // detector efficiency
  double gamma_db_per_km = 0.2;
  double t_c = std::numeric_limits<double>::infinity();  // memory coherence time, s
  double t_0 = 1.0e-5;   // slowest gate/measurement repetition period, s
  double t_proc = 0.0;   // local processing time added to storage, s
  // Reflection counts; kAutoReflections means "derive from m":
  // sender m+1, receiver syndrome m, receiver entangling 1.
  int alice_reflections = kAutoReflections;
  int bob_syndrome_reflections = kAutoReflections;
  int bob_entangle_reflections = kAutoReflections;
};

inline void validate_noise_model(const NoiseModel& nm) {
  auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in01(nm.eta_int) || !in01(nm.eta_dc) || !in01(nm.eta_uc) || !in01(nm.eta_d))
    throw std::domain_error("NoiseModel: efficiencies must lie in [0,1]");
  if (nm.gamma_db_per_km < 0.0)
    throw std::domain_error("NoiseModel: attenuation must be >= 0");
  if (!(nm.t_c > 0.0))
    throw std::domain_error("NoiseModel: t_c must be positive (inf allowed)");
  if (!(nm.t_0 > 0.0)) throw std::domain_error("NoiseModel: t_0 must be positive");
  if (nm.t_proc < 0.0) throw std::domain_error("NoiseModel: t_proc must be >= 0");
}

// All efficiencies ideal; only fiber attenuation remains.
inline NoiseModel ideal_noise() { return NoiseModel{}; }

// Measured-hardware preset: cavity reflections at 0.81, conversion chain
// 0.8 * 0.05, detectors at 0.97, 10 ms memory.
inline NoiseModel table1_noise() {
  NoiseModel nm;
  nm.eta_int = 0.81;
  nm.eta_dc = 0.8;
  nm.eta_uc = 0.05;
  nm.eta_d = 0.97;
  nm.t_c = 1.0e-2;
  return nm;
}

// Same hardware with the alternative (pessimistic) down-conversion value.
inline NoiseModel table1_altdc_noise() {
  NoiseModel nm = table1_noise();
  nm.eta_dc = 0.356;
  return nm;
}

inline double fiber_transmissivity(double l_km, double gamma_db_per_km) {
  if (l_km < 0.0) throw std::domain_error("fiber_transmissivity: L must be >= 0");
  return std::pow(10.0, -gamma_db_per_km * l_km / 10.0);
}

inline int resolved_reflections(const NoiseModel& nm, int m) {
  const int a = nm.alice_reflections == kAutoReflections ? m + 1 : nm.alice_reflections;
  const int s = nm.bob_syndrome_reflections == kAutoReflections ? m : nm.bob_syndrome_reflections;
  const int e = nm.bob_entangle_reflections == kAutoReflections ? 1 : nm.bob_entangle_reflections;
  if (a < 0 || s < 0 || e < 0)
    throw std::domain_error("NoiseModel: reflection counts must be >= 0");
  return a + s + e;
}

// Effective end-to-end transmissivity: every cavity reflection costs eta_int,
// both conversions and the detector are crossed once, and the fiber
// contributes 10^(-gamma L / 10).
inline double total_transmissivity(const NoiseModel& nm, double l_km, int m) {
  validate_noise_model(nm);
  return std::pow(nm.eta_int, resolved_reflections(nm, m)) * nm.eta_dc *
         nm.eta_uc * nm.eta_d * fiber_transmissivity(l_km, nm.gamma_db_per_km);
}

// Time the sender's memory must hold its half of the state: one-way travel
// plus local processing.
inline double storage_time(double l_km, const NoiseModel& nm) {
  if (l_km < 0.0) throw std::domain_error("storage_time: L must be >= 0");
  return l_km * 1000.0 / kFiberLightSpeed + nm.t_proc;
}

// Exponential decay of the Bell coherence: F' = 1/2 + (F - 1/2) e^{-t/t_c}.
inline double dephase_fidelity(double fidelity, double t, double t_c) {
  if (!(fidelity >= 0.5 && fidelity <= 1.0 + 1e-12))
    throw std::domain_error("dephase_fidelity: F must lie in [1/2, 1]");
  if (t < 0.0) throw std::domain_error("dephase_fidelity: t must be >= 0");
  if (!(t_c > 0.0)) throw std::domain_error("dephase_fidelity: t_c must be positive");
  if (std::isinf(t_c)) return fidelity;
  return 0.5 + (fidelity - 0.5) * std::exp(-t / t_c);
}

}  // namespace catbell
