#pragma once

// Density operators on the truncated Fock space: the pure-loss channel in
// Kraus form, controlled number-phase rotations on a qubit (x) light joint
// space, number-modulo projectors, and small diagnostic helpers.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "catbell/fock.hpp"

namespace catbell {

using Matrix = Eigen::MatrixXcd;

namespace detail {

// sqrt(C(n,k) eta^{n-k} (1-eta)^k) evaluated in log space; callers handle
// the eta = 0 and eta = 1 edge cases where 0*log(0) would poison the result.
inline double loss_amp(int n, int k, double eta) {
  const double lc =
      std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(0.5 * (lc + (n - k) * std::log(eta) + k * std::log1p(-eta)));
}

}  // namespace detail

// Kraus operator K_k of the transmissivity-eta pure-loss channel:
// <n-k| K_k |n> = sqrt(C(n,k) eta^{n-k} (1-eta)^k). The family satisfies
// sum_k K_k^dag K_k = I exactly on the represented space.
inline Matrix loss_kraus(double eta, int k, int dim) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("loss_kraus: eta must lie in [0,1]");
  if (k < 0 || k >= dim)
    throw std::invalid_argument("loss_kraus: need 0 <= k < dim");
  Matrix K = Matrix::Zero(dim, dim);
  if (eta == 1.0) {
    if (k == 0) K.setIdentity();
    return K;  // lossless: only K_0 survives
  }
  if (eta == 0.0) {
    K(0, k) = 1.0;  // everything decays to vacuum: K_k = |0><k|
    return K;
  }
  for (int n = k; n < dim; ++n) K(n - k, n) = detail::loss_amp(n, k, eta);
  return K;
}

// sum_k K_k rho K_k^dag. Each Kraus term is a k-shifted submatrix scaled by
// diagonal coefficient vectors, so the whole sum costs O(dim^3) instead of
// the naive O(dim^4) of dim dense triple products.
inline Matrix apply_loss_channel(const Matrix& rho, double eta) {
  const int dim = static_cast<int>(rho.rows());
  if (rho.cols() != dim)
    throw std::invalid_argument("apply_loss_channel: matrix must be square");
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::domain_error("apply_loss_channel: eta must lie in [0,1]");
  if (eta == 1.0) return rho;
  Matrix out = Matrix::Zero(dim, dim);
  if (eta == 0.0) {
    out(0, 0) = rho.trace();
    return out;
  }
  Eigen::VectorXd c(dim);
  for (int k = 0; k < dim; ++k) {
    const int rem = dim - k;
    for (int i = 0; i < rem; ++i) c[i] = detail::loss_amp(i + k, k, eta);
    out.topLeftCorner(rem, rem).noalias() +=
        c.head(rem).asDiagonal() * rho.bottomRightCorner(rem, rem).eval() *
        c.head(rem).asDiagonal();
  }
  return out;
}

// Largest deviation of sum_k K_k^dag K_k from identity over the subspace
// n < dim - safety_margin (the reliably represented levels).
inline double kraus_completeness_defect(double eta, int dim,
                                        int safety_margin = 0) {
  // sum_k |<n-k|K_k|n>|^2 = sum_k C(n,k) eta^{n-k} (1-eta)^k, a plain
  // binomial sum per level; no matrices needed
  double worst = 0.0;
  for (int n = 0; n < dim - safety_margin; ++n) {
    double s = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double a = (eta == 0.0 || eta == 1.0)
                           ? ((eta == 1.0) ? (k == 0 ? 1.0 : 0.0)
                                           : (k == n ? 1.0 : 0.0))
                           : detail::loss_amp(n, k, eta);
      s += a * a;
    }
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

// Diagonal phase e^{i theta n} on the light mode, applied only where the
// control qubit is |down>. Joint basis ordering: index q*dim + n with
// q = 0 for |up>, q = 1 for |down>.
inline Matrix controlled_number_rotation(const Matrix& joint, double theta) {
  const int full = static_cast<int>(joint.rows());
  if (joint.cols() != full || full % 2 != 0)
    throw std::invalid_argument(
        "controlled_number_rotation: joint operator must be square with even dimension (qubit x Fock)");
  const int dim = full / 2;
  Eigen::VectorXcd d(full);
  for (int n = 0; n < dim; ++n) {
    d[n] = 1.0;
    d[dim + n] = std::exp(Complex(0.0, theta * n));
  }
  return d.asDiagonal() * joint * d.conjugate().asDiagonal();
}

// Parity (-1)^n on the |down> branch; the theta = pi special case.
inline Matrix controlled_parity(const Matrix& joint) {
  return controlled_number_rotation(joint, std::numbers::pi);
}

// Diagonal projector onto photon numbers n = residue (mod 2^m).
inline Matrix number_mod_projector(int m, int residue, int dim) {
  if (m < 0) throw std::invalid_argument("number_mod_projector: m must be >= 0");
  const int mod = 1 << m;
  if (residue < 0 || residue >= mod)
    throw std::invalid_argument("number_mod_projector: residue out of range");
  Matrix P = Matrix::Zero(dim, dim);
  for (int n = residue; n < dim; n += mod) P(n, n) = 1.0;
  return P;
}

// max |rho - rho^dag| entrywise.
inline double hermiticity_defect(const Matrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

// Smallest eigenvalue of the Hermitian part (negative values beyond
// tolerance indicate an invalid state).
inline double min_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// tr(rho^2) for a (possibly unnormalized) Hermitian operator.
inline double purity(const Matrix& rho) {
  return (rho * rho).trace().real();
}

}  // namespace catbell
