#pragma once

// Unambiguous discrimination of two pure states with equal priors: the
// optimal success probability 1 - |<psi0|psi1>|, the POVM attaining it, and
// the pluggable strategy abstraction used by the protocol pipeline.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "catbell/fock.hpp"

namespace catbell {

enum class UsdKind {
  kTheoreticalUpperBound,  // optimal USD, success = 1 - |overlap|
  kBeamsplitter0Loss,      // beam-splitter scheme; valid only for a pair of
                           // single-component coherent states, where it
                           // attains the bound
  kSurrogateScaled,        // stand-in for an unspecified physical circuit:
                           // success = kappa * bound, conditioning unchanged
};

struct UsdStrategy {
  UsdKind kind = UsdKind::kTheoreticalUpperBound;
  double kappa = 1.0;  // only meaningful for kSurrogateScaled
};

inline void validate_strategy(const UsdStrategy& st) {
  if (st.kind != UsdKind::kSurrogateScaled && st.kappa != 1.0)
    throw std::invalid_argument("UsdStrategy: kappa must be 1 unless surrogate-scaled");
  if (!(st.kappa > 0.0 && st.kappa <= 1.0))
    throw std::invalid_argument("UsdStrategy: kappa must lie in (0,1]");
}

// Optimal unambiguous-discrimination success probability for equal priors.
inline double usd_bound(const FockVector& psi0, const FockVector& psi1) {
  return 1.0 - std::abs(inner_product(psi0, psi1));
}

struct UsdOutcome {
  double p_success = 0.0;  // equal-prior average success probability
  Eigen::MatrixXcd e0;     // heralds psi0 (never fires on psi1)
  Eigen::MatrixXcd e1;     // heralds psi1 (never fires on psi0)
  Eigen::MatrixXcd e_fail; // inconclusive remainder
};

// Symmetric two-state USD POVM. Each conclusive element is the rank-1
// projector onto the part of one state orthogonal to the other, scaled by
// 1/(1 + |s|); both states then succeed with probability exactly 1 - |s|.
// An (almost) identical pair degenerates to "always inconclusive".
inline UsdOutcome usd_povm(const FockVector& psi0, const FockVector& psi1) {
  const int dim = static_cast<int>(psi0.size());
  const Complex s = inner_product(psi0, psi1);
  UsdOutcome out;
  if (1.0 - std::abs(s) < 1e-12) {
    out.e0 = Eigen::MatrixXcd::Zero(dim, dim);
    out.e1 = Eigen::MatrixXcd::Zero(dim, dim);
    out.e_fail = Eigen::MatrixXcd::Identity(dim, dim);
    return out;
  }
  const FockVector perp0 = (psi0 - psi1 * std::conj(s)).normalized();  // _|_ psi1
  const FockVector perp1 = (psi1 - psi0 * s).normalized();             // _|_ psi0
  const double mu = 1.0 / (1.0 + std::abs(s));
  out.e0 = mu * perp0 * perp0.adjoint();
  out.e1 = mu * perp1 * perp1.adjoint();
  out.e_fail = Eigen::MatrixXcd::Identity(dim, dim) - out.e0 - out.e1;
  out.p_success = 1.0 - std::abs(s);
  return out;
}

namespace detail {

// Largest modulus in {4, 2} such that the state's support lies in a single
// residue class mod that modulus; 1 when the support is spread. Multi-
// component cat states (and their post-loss images) are modular, a single
// coherent component is not.
inline int support_modulus(const FockVector& psi) {
  const double total = psi.squaredNorm();
  for (int mod : {4, 2}) {
    for (int r = 0; r < mod; ++r) {
      double off = 0.0;
      for (int n = 0; n < psi.size(); ++n)
        if (n % mod != r) off += std::norm(psi[n]);
      if (off <= 1e-12 * total) return mod;
    }
  }
  return 1;
}

}  // namespace detail

// Success probability of the chosen discrimination strategy. The ideal bound
// and the beam-splitter scheme both reach 1 - |s| (the latter only exists for
// single-component coherent inputs); the surrogate scales the bound by kappa.
inline double strategy_success(const UsdStrategy& st, const FockVector& psi0,
                               const FockVector& psi1) {
  validate_strategy(st);
  const double bound = usd_bound(psi0, psi1);
  switch (st.kind) {
    case UsdKind::kTheoreticalUpperBound:
      return bound;
    case UsdKind::kBeamsplitter0Loss:
      if (detail::support_modulus(psi0) != 1 || detail::support_modulus(psi1) != 1)
        throw std::invalid_argument(
            "strategy_success: beam-splitter discrimination is only defined for "
            "single-component coherent inputs");
      return bound;
    case UsdKind::kSurrogateScaled:
      return st.kappa * bound;
  }
  throw std::logic_error("strategy_success: unknown strategy kind");
}

}  // namespace catbell
