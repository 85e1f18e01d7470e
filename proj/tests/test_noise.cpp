#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "catbell/noise.hpp"

using namespace catbell;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("fiber_transmissivity: pinned decades") {
  REQUIRE_THAT(fiber_transmissivity(0.0, 0.2), WithinAbs(1.0, 0.0));
  REQUIRE_THAT(fiber_transmissivity(10.0, 0.2),
               WithinAbs(0.63095734448019325, 1e-14));  // 10^-0.2
  REQUIRE_THAT(fiber_transmissivity(15.0, 0.2),
               WithinAbs(0.50118723362727229, 1e-14));  // 10^-0.3
  REQUIRE_THAT(fiber_transmissivity(50.0, 0.2), WithinAbs(0.1, 1e-15));
  REQUIRE_THROWS_AS(fiber_transmissivity(-1.0, 0.2), std::domain_error);
}

TEST_CASE("fiber_transmissivity is multiplicative over segments") {
  const double g = 0.17;
  for (double l1 : {3.0, 12.5})
    for (double l2 : {0.0, 7.25}) {
      REQUIRE_THAT(fiber_transmissivity(l1 + l2, g),
                   WithinRel(fiber_transmissivity(l1, g) *
                                 fiber_transmissivity(l2, g),
                             1e-13));
    }
}

TEST_CASE("total_transmissivity: ideal hardware leaves only fiber loss") {
  const NoiseModel nm = ideal_noise();
  for (int m : {0, 1, 2}) {
    REQUIRE_THAT(total_transmissivity(nm, 0.0, m), WithinAbs(1.0, 0.0));
    REQUIRE_THAT(total_transmissivity(nm, 25.0, m),
                 WithinAbs(fiber_transmissivity(25.0, 0.2), 1e-15));
  }
}

TEST_CASE("total_transmissivity: measured-hardware preset, pinned value") {
  // m=0: two reflections (sender 1, receiver entangler 1), conversions and
  // detector once -> 0.81^2 * 0.8 * 0.05 * 0.97
  const NoiseModel nm = table1_noise();
  REQUIRE_THAT(total_transmissivity(nm, 0.0, 0), WithinAbs(0.02545668, 1e-12));
  // each code order adds two reflections (sender +1, syndrome +1)
  REQUIRE_THAT(total_transmissivity(nm, 0.0, 1),
               WithinRel(0.02545668 * 0.81 * 0.81, 1e-12));
  REQUIRE_THAT(total_transmissivity(nm, 0.0, 2),
               WithinRel(0.02545668 * std::pow(0.81, 4), 1e-12));
}

TEST_CASE("reflection-count overrides replace the per-m defaults") {
  NoiseModel nm = table1_noise();
  nm.alice_reflections = 0;
  nm.bob_syndrome_reflections = 0;
  nm.bob_entangle_reflections = 0;
  // no cavity reflections at all: eta_int drops out entirely
  REQUIRE_THAT(total_transmissivity(nm, 0.0, 2),
               WithinRel(0.8 * 0.05 * 0.97, 1e-13));
  REQUIRE(resolved_reflections(nm, 2) == 0);
  nm.alice_reflections = 5;
  REQUIRE(resolved_reflections(nm, 2) == 5);
  nm.alice_reflections = -3;
  REQUIRE_THROWS_AS(resolved_reflections(nm, 0), std::domain_error);
}

TEST_CASE("presets carry the documented values") {
  const NoiseModel t1 = table1_noise();
  REQUIRE(t1.eta_int == 0.81);
  REQUIRE(t1.eta_dc == 0.8);
  REQUIRE(t1.eta_uc == 0.05);
  REQUIRE(t1.eta_d == 0.97);
  REQUIRE(t1.t_c == 1e-2);
  REQUIRE(t1.gamma_db_per_km == 0.2);
  const NoiseModel alt = table1_altdc_noise();
  REQUIRE(alt.eta_dc == 0.356);
  REQUIRE(alt.eta_uc == t1.eta_uc);
  const NoiseModel id = ideal_noise();
  REQUIRE(id.eta_int == 1.0);
  REQUIRE(std::isinf(id.t_c));
  REQUIRE(id.t_0 == 1e-5);
}

TEST_CASE("noise model validation rejects out-of-range fields") {
  NoiseModel nm;
  nm.eta_d = 1.3;
  REQUIRE_THROWS_AS(validate_noise_model(nm), std::domain_error);
  nm = NoiseModel{};
  nm.gamma_db_per_km = -0.1;
  REQUIRE_THROWS_AS(validate_noise_model(nm), std::domain_error);
  nm = NoiseModel{};
  nm.t_0 = 0.0;
  REQUIRE_THROWS_AS(validate_noise_model(nm), std::domain_error);
  nm = NoiseModel{};
  nm.t_c = -1.0;
  REQUIRE_THROWS_AS(validate_noise_model(nm), std::domain_error);
  nm = NoiseModel{};
  nm.t_proc = -1e-9;
  REQUIRE_THROWS_AS(validate_noise_model(nm), std::domain_error);
  REQUIRE_NOTHROW(validate_noise_model(NoiseModel{}));
}

TEST_CASE("storage_time: one-way travel plus processing") {
  NoiseModel nm;
  REQUIRE_THAT(storage_time(10.0, nm), WithinAbs(5e-5, 1e-18));
  REQUIRE_THAT(storage_time(0.0, nm), WithinAbs(0.0, 0.0));
  nm.t_proc = 2e-6;
  REQUIRE_THAT(storage_time(10.0, nm), WithinAbs(5.2e-5, 1e-18));
  REQUIRE_THROWS_AS(storage_time(-1.0, nm), std::domain_error);
}

TEST_CASE("dephase_fidelity: exponential contraction toward 1/2") {
  // t/t_c = 0.025 from F = 1
  REQUIRE_THAT(dephase_fidelity(1.0, 5e-5, 2e-3),
               WithinAbs(0.98765495601416633, 1e-14));
  REQUIRE_THAT(dephase_fidelity(0.9, 0.0, 1e-3), WithinAbs(0.9, 0.0));
  REQUIRE_THAT(dephase_fidelity(0.9, 1e-3,
                                std::numeric_limits<double>::infinity()),
               WithinAbs(0.9, 0.0));
  REQUIRE_THAT(dephase_fidelity(0.5, 1.0, 1e-3), WithinAbs(0.5, 0.0));
  // never increases F, never undershoots 1/2
  for (double f : {0.5, 0.7, 1.0})
    for (double t : {1e-6, 1e-3, 10.0})
      for (double tc : {1e-4, 1e-1}) {
        const double fp = dephase_fidelity(f, t, tc);
        REQUIRE(fp <= f);
        REQUIRE(fp >= 0.5);
      }
  REQUIRE_THROWS_AS(dephase_fidelity(0.4, 1.0, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(dephase_fidelity(0.9, -1.0, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(dephase_fidelity(0.9, 1.0, 0.0), std::domain_error);
}

TEST_CASE("short links with slow dephasing barely move the coherence") {
  // up to 10 km with t_c >= 10 ms: the dephasing factor stays above 0.995
  NoiseModel nm;
  nm.t_c = 1e-2;
  for (double l : {1.0, 5.0, 10.0}) {
    const double factor = std::exp(-storage_time(l, nm) / nm.t_c);
    REQUIRE(factor > 0.995);
  }
}
