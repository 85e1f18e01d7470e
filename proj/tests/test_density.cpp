#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "catbell/density.hpp"
#include "catbell/fock.hpp"

using namespace catbell;
using Catch::Matchers::WithinAbs;

namespace {

// Exact small-integer binomial amplitude, products only — no lgamma, no logs.
double loss_amp_oracle(int n, int k, double eta) {
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom *= double(n - k + i) / i;
  return std::sqrt(binom * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
}

// Deterministic pseudo-random Hermitian unit-trace matrix.
Matrix random_density(int dim, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(g(gen), g(gen));
  Matrix rho = a * a.adjoint();  // positive semidefinite
  return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("loss_kraus entries match the direct binomial oracle") {
  const int dim = 30;
  for (double eta : {0.15, 0.5, 0.83}) {
    for (int k : {0, 1, 3, 7}) {
      const Matrix kk = loss_kraus(eta, k, dim);
      for (int n = 0; n < dim; ++n)
        for (int r = 0; r < dim; ++r) {
          const double want =
              (r == n - k && n >= k) ? loss_amp_oracle(n, k, eta) : 0.0;
          CAPTURE(eta, k, n, r);
          REQUIRE_THAT(std::abs(kk(r, n) - want), WithinAbs(0.0, 1e-12));
        }
    }
  }
}

TEST_CASE("loss_kraus edge transmissivities") {
  const Matrix k0 = loss_kraus(1.0, 0, 6);
  REQUIRE_THAT((k0 - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 0.0));
  REQUIRE_THAT(loss_kraus(1.0, 2, 6).cwiseAbs().maxCoeff(), WithinAbs(0.0, 0.0));
  const Matrix v3 = loss_kraus(0.0, 3, 6);  // |0><3|
  REQUIRE_THAT(std::abs(v3(0, 3) - 1.0), WithinAbs(0.0, 0.0));
  REQUIRE_THAT(v3.cwiseAbs().sum(), WithinAbs(1.0, 0.0));
  REQUIRE_THROWS_AS(loss_kraus(1.2, 0, 6), std::domain_error);
  REQUIRE_THROWS_AS(loss_kraus(0.5, 6, 6), std::invalid_argument);
  REQUIRE_THROWS_AS(loss_kraus(0.5, -1, 6), std::invalid_argument);
}

TEST_CASE("Kraus family resolves the identity") {
  REQUIRE(kraus_completeness_defect(0.37, 40) < 1e-10);
  REQUIRE(kraus_completeness_defect(0.8, 40) < 1e-10);
  REQUIRE(kraus_completeness_defect(1.0, 40) == 0.0);
  // direct matrix sum as a second, slower route
  const int dim = 18;
  Matrix sum = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const Matrix kk = loss_kraus(0.62, k, dim);
    sum += kk.adjoint() * kk;
  }
  REQUIRE_THAT((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("apply_loss_channel equals the naive Kraus sum") {
  const int dim = 22;
  const Matrix rho = random_density(dim, 1234);
  for (double eta : {0.2, 0.55, 0.95}) {
    Matrix naive = Matrix::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
      const Matrix kk = loss_kraus(eta, k, dim);
      naive += kk * rho * kk.adjoint();
    }
    const Matrix fast = apply_loss_channel(rho, eta);
    CAPTURE(eta);
    REQUIRE_THAT((fast - naive).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-13));
    REQUIRE_THAT(fast.trace().real(), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(hermiticity_defect(fast), WithinAbs(0.0, 1e-13));
    REQUIRE(min_eigenvalue(fast) > -1e-12);
  }
}

TEST_CASE("loss channel edge cases and validation") {
  const Matrix rho = random_density(8, 7);
  REQUIRE_THAT((apply_loss_channel(rho, 1.0) - rho).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 0.0));
  const Matrix dead = apply_loss_channel(rho, 0.0);
  REQUIRE_THAT(std::abs(dead(0, 0) - 1.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(dead.cwiseAbs().sum(), WithinAbs(1.0, 1e-14));
  REQUIRE_THROWS_AS(apply_loss_channel(rho, -0.1), std::domain_error);
  REQUIRE_THROWS_AS(apply_loss_channel(Matrix::Zero(3, 4), 0.5),
                    std::invalid_argument);
}

TEST_CASE("loss maps coherent states to attenuated coherent states") {
  const int dim = choose_truncation(1.6, 1e-12) + 5;
  const FockVector psi = coherent_state(Complex(1.2, -0.7), dim);
  const Matrix rho = psi * psi.adjoint();
  for (double eta : {0.3, 0.7}) {
    const Matrix out = apply_loss_channel(rho, eta);
    const FockVector target =
        coherent_state(std::sqrt(eta) * Complex(1.2, -0.7), dim);
    // fidelity with |sqrt(eta) alpha> is 1; entrywise match too
    REQUIRE_THAT((target.dot(out * target)).real(), WithinAbs(1.0, 1e-9));
    REQUIRE_THAT((out - target * target.adjoint()).cwiseAbs().maxCoeff(),
                 WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("loss channels compose multiplicatively") {
  const int dim = choose_truncation(1.4, 1e-12) + 5;
  const FockVector psi = coherent_state(1.4, dim);
  Matrix rho = psi * psi.adjoint();
  const Matrix two_step =
      apply_loss_channel(apply_loss_channel(rho, 0.8), 0.55);
  const Matrix one_step = apply_loss_channel(rho, 0.8 * 0.55);
  REQUIRE_THAT((two_step - one_step).cwiseAbs().maxCoeff(),
               WithinAbs(0.0, 1e-11));
}

TEST_CASE("loss contracts the mean photon number by eta") {
  const int dim = choose_truncation(1.8, 1e-12) + 5;
  const FockVector psi = coherent_state(1.8, dim);
  const double n_in = mean_photon(psi);
  for (double eta : {0.25, 0.6, 0.9}) {
    const Matrix out = apply_loss_channel(psi * psi.adjoint(), eta);
    double n_out = 0.0;
    for (int n = 0; n < dim; ++n) n_out += n * out(n, n).real();
    CAPTURE(eta);
    REQUIRE_THAT(n_out, WithinAbs(eta * n_in, 1e-7));
  }
}

TEST_CASE("controlled_number_rotation phases only the down branch") {
  const int dim = 5, full = 2 * dim;
  const Matrix joint = random_density(full, 99);
  const double theta = 0.77;
  // direct unitary oracle U = diag(1...1, e^{i theta n})
  Eigen::VectorXcd u(full);
  for (int n = 0; n < dim; ++n) {
    u[n] = 1.0;
    u[dim + n] = std::exp(Complex(0.0, theta * n));
  }
  Matrix want(full, full);
  for (int r = 0; r < full; ++r)
    for (int c = 0; c < full; ++c) want(r, c) = u[r] * joint(r, c) * std::conj(u[c]);
  const Matrix got = controlled_number_rotation(joint, theta);
  REQUIRE_THAT((got - want).cwiseAbs().maxCoeff(), WithinAbs(0.0, 1e-14));
  // unitarity: trace and purity preserved
  REQUIRE_THAT(got.trace().real(), WithinAbs(joint.trace().real(), 1e-13));
  REQUIRE_THAT(purity(got), WithinAbs(purity(joint), 1e-12));
  REQUIRE_THROWS_AS(controlled_number_rotation(Matrix::Zero(5, 5), 1.0),
                    std::invalid_argument);
}

TEST_CASE("controlled_parity flips odd levels on the down branch") {
  const int dim = 4, full = 8;
  Matrix joint = Matrix::Zero(full, full);
  // coherence between (up, n=1) and (down, n=1): picks up a factor -1
  joint(1, dim + 1) = 1.0;
  // coherence between (down, n=1) and (down, n=2): (-1)(+1) -> -1
  joint(dim + 1, dim + 2) = 1.0;
  // (down, n=2) diagonal: untouched
  joint(dim + 2, dim + 2) = 1.0;
  const Matrix out = controlled_parity(joint);
  REQUIRE_THAT(std::abs(out(1, dim + 1) + 1.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(out(dim + 1, dim + 2) + 1.0), WithinAbs(0.0, 1e-14));
  REQUIRE_THAT(std::abs(out(dim + 2, dim + 2) - 1.0), WithinAbs(0.0, 1e-14));
}

TEST_CASE("number_mod_projector partitions the identity") {
  const int dim = 21;
  for (int m : {0, 1, 2}) {
    const int mod = 1 << m;
    Matrix sum = Matrix::Zero(dim, dim);
    for (int r = 0; r < mod; ++r) {
      const Matrix p = number_mod_projector(m, r, dim);
      REQUIRE_THAT((p * p - p).cwiseAbs().maxCoeff(), WithinAbs(0.0, 0.0));
      sum += p;
    }
    REQUIRE_THAT((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff(),
                 WithinAbs(0.0, 0.0));
  }
  const Matrix p2 = number_mod_projector(2, 3, dim);
  for (int n = 0; n < dim; ++n)
    REQUIRE(p2(n, n).real() == (n % 4 == 3 ? 1.0 : 0.0));
  REQUIRE_THROWS_AS(number_mod_projector(1, 2, dim), std::invalid_argument);
  REQUIRE_THROWS_AS(number_mod_projector(-1, 0, dim), std::invalid_argument);
}

TEST_CASE("diagnostic helpers") {
  Matrix rho = random_density(6, 5);
  REQUIRE_THAT(hermiticity_defect(rho), WithinAbs(0.0, 1e-14));
  REQUIRE(min_eigenvalue(rho) > -1e-14);
  rho(2, 3) += Complex(0.0, 0.5);  // break Hermiticity
  REQUIRE(hermiticity_defect(rho) > 0.4);
  // purity of a pure projector is 1
  const FockVector psi = coherent_state(0.9, 15);
  REQUIRE_THAT(purity(psi * psi.adjoint()), WithinAbs(1.0, 1e-12));
}
