#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "catbell/bell.hpp"

using namespace catbell;
using Catch::Matchers::WithinAbs;

namespace {

// Horodecki oracle, worked by hand: the dephased Bell mixture of fidelity F
// has correlation matrix diag(c, -c, 1) with c = 2F - 1, so the two largest
// eigenvalues of T^T T are 1 and c^2.
double s_max_oracle(double f) {
  const double c = 2.0 * f - 1.0;
  return 2.0 * std::sqrt(1.0 + c * c);
}

Matrix4 bell_phi(bool plus) {
  Matrix4 rho = Matrix4::Zero();
  rho(0, 0) = rho(3, 3) = 0.5;
  rho(0, 3) = rho(3, 0) = plus ? 0.5 : -0.5;
  return rho;
}

}  // namespace

TEST_CASE("observable: Pauli structure and unit-norm guard") {
  const Matrix2 z = observable(Vec3(0, 0, 1));
  REQUIRE(z(0, 0) == Complex(1, 0));
  REQUIRE(z(1, 1) == Complex(-1, 0));
  const Matrix2 x = observable(Vec3(1, 0, 0));
  REQUIRE(x(0, 1) == Complex(1, 0));
  const Matrix2 y = observable(Vec3(0, 1, 0));
  REQUIRE(y(0, 1) == Complex(0, -1));
  REQUIRE(y(1, 0) == Complex(0, 1));
  // sigma_x sigma_y = i sigma_z fixes the handedness
  REQUIRE_THAT(((x * y) - Complex(0, 1) * z).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-15));
  // every n.sigma squares to the identity
  const Vec3 n = Vec3(0.3, -0.5, 0.81).normalized();
  const Matrix2 o = observable(n);
  REQUIRE_THAT((o * o - Matrix2::Identity()).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-14));
  REQUIRE_THROWS_AS(observable(Vec3(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("state_from_fidelity spans phi+ to phi-") {
  for (double f : {0.0, 0.25, 0.5, 0.8, 1.0}) {
    const Matrix4 rho = state_from_fidelity(f);
    REQUIRE_THAT(rho.trace().real(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT((rho - rho.adjoint()).cwiseAbs().maxCoeff(),
                 WithinAbs(0.0, 0.0));
    // overlap with phi+ reproduces F
    REQUIRE_THAT((rho * bell_phi(true)).trace().real(), WithinAbs(f, 1e-15));
  }
  REQUIRE_THAT((state_from_fidelity(1.0) - bell_phi(true)).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 0.0));
  REQUIRE_THROWS_AS(state_from_fidelity(1.2), std::domain_error);
}

TEST_CASE("chsh_value at the optimal settings reaches the closed form") {
  for (double f = 0.5; f <= 1.0 + 1e-12; f += 0.05) {
    const double s = chsh_value(state_from_fidelity(f), optimal_settings(f));
    CAPTURE(f);
    REQUIRE_THAT(s, WithinAbs(s_max_oracle(f), 1e-12));
  }
  // pinned: F=0.9 -> 2 sqrt(1.64); F=1 -> 2 sqrt(2); F=1/2 -> 2
  REQUIRE_THAT(s_max(0.9), WithinAbs(2.5612496949731395, 1e-14));
  REQUIRE_THAT(s_max(1.0), WithinAbs(2.8284271247461901, 1e-14));
  REQUIRE_THAT(s_max(0.5), WithinAbs(2.0, 0.0));
  REQUIRE_THROWS_AS(optimal_settings(0.4), std::domain_error);
  REQUIRE_THROWS_AS(s_max(-0.1), std::domain_error);
}

TEST_CASE("chsh_value is linear in the state") {
  const Matrix4 r1 = state_from_fidelity(0.95);
  const Matrix4 r2 = state_from_fidelity(0.6);
  const MeasurementSetting ms = optimal_settings(0.8);
  for (double p : {0.0, 0.3, 0.7, 1.0}) {
    const Matrix4 mix = p * r1 + (1.0 - p) * r2;
    REQUIRE_THAT(chsh_value(mix, ms),
                 WithinAbs(p * chsh_value(r1, ms) +
                               (1.0 - p) * chsh_value(r2, ms),
                           1e-9));
  }
}

TEST_CASE("s_max_numeric equals the closed form on the Bell mixture") {
  for (double f = 0.0; f <= 1.0 + 1e-12; f += 0.05) {
    CAPTURE(f);
    REQUIRE_THAT(s_max_numeric(state_from_fidelity(f)),
                 WithinAbs(s_max_oracle(f), 1e-8));
  }
}

TEST_CASE("s_max_numeric dominates chsh_value over sampled settings") {
  const Matrix4 rho = state_from_fidelity(0.83);
  const double cap = s_max_numeric(rho);
  for (double th = 0.0; th < 3.14; th += 0.35)
    for (double ph : {0.0, 1.1, 2.6}) {
      MeasurementSetting ms = optimal_settings(0.83);
      ms.b0 = Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                   std::cos(th));
      REQUIRE(chsh_value(rho, ms) <= cap + 1e-7);
    }
}

TEST_CASE("s_max_numeric on separable and y-coherent states") {
  Matrix4 up_up = Matrix4::Zero();
  up_up(0, 0) = 1.0;  // product state: T = diag(0, 0, 1) -> S = 2
  REQUIRE_THAT(s_max_numeric(up_up), WithinAbs(2.0, 1e-12));
  // psi+ = (ud + du)/sqrt(2): T = diag(1, 1, -1) -> S = 2 sqrt 2
  Matrix4 psi_plus = Matrix4::Zero();
  psi_plus(1, 1) = psi_plus(2, 2) = 0.5;
  psi_plus(1, 2) = psi_plus(2, 1) = 0.5;
  REQUIRE_THAT(s_max_numeric(psi_plus), WithinAbs(2.8284271247461901, 1e-12));
  // a complex-phase Bell coherence: maximal S is phase-invariant
  Matrix4 rot = bell_phi(true);
  rot(0, 3) = Complex(0.0, 0.5);
  rot(3, 0) = Complex(0.0, -0.5);
  REQUIRE_THAT(s_max_numeric(rot), WithinAbs(2.8284271247461901, 1e-12));
}

TEST_CASE("grid search confirms the eigenvalue route") {
  for (double f : {0.5, 0.7, 0.9, 1.0}) {
    const Matrix4 rho = state_from_fidelity(f);
    CAPTURE(f);
    REQUIRE_THAT(s_max_grid(rho), WithinAbs(s_max_numeric(rho), 1e-6));
  }
}

TEST_CASE("violation iff F above one half") {
  REQUIRE(s_max(0.5) <= 2.0 + 1e-15);
  for (double f : {0.501, 0.6, 0.99}) REQUIRE(s_max(f) > 2.0);
  // strictly increasing on [1/2, 1]
  double prev = s_max(0.5);
  for (double f = 0.55; f <= 1.0 + 1e-12; f += 0.05) {
    REQUIRE(s_max(f) > prev);
    prev = s_max(f);
  }
}

TEST_CASE("fidelity_to_bell picks the better Z-frame") {
  REQUIRE_THAT(fidelity_to_bell(bell_phi(true)), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(fidelity_to_bell(bell_phi(false)), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(fidelity_to_bell(state_from_fidelity(0.72)),
               WithinAbs(0.72, 1e-15));
  // phi- -leaning mixture: the Z-frame flip recovers it
  REQUIRE_THAT(fidelity_to_bell(state_from_fidelity(0.28)),
               WithinAbs(0.72, 1e-15));
  Matrix4 maximally_mixed = 0.25 * Matrix4::Identity();
  REQUIRE_THAT(fidelity_to_bell(maximally_mixed), WithinAbs(0.25, 1e-15));
}
