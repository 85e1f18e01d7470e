#pragma once

// CHSH evaluation for two-qubit states: explicit measurement settings, the
// dephased-Bell-mixture family and its optimal settings, and two independent
// maximal-violation computations (correlation-matrix eigenvalues and a grid
// search over receiver settings).

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace catbell {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

// Bloch directions of the four +/-1-valued observables. Convention:
// right-handed x, y, z with sigma_x sigma_y = i sigma_z.
struct MeasurementSetting {
  Vec3 a0, a1, b0, b1;
};

// n . sigma for a unit Bloch vector n.
inline Matrix2 observable(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("observable: Bloch vector must have unit norm");
  Matrix2 o;
  o << n.z(), Complex(n.x(), -n.y()), Complex(n.x(), n.y()), -n.z();
  return o;
}

namespace detail {

inline Matrix4 kron2(const Matrix2& a, const Matrix2& b) {
  Matrix4 k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

inline const std::array<Matrix2, 3>& paulis() {
  static const std::array<Matrix2, 3> s = [] {
    std::array<Matrix2, 3> p;
    p[0] << 0, 1, 1, 0;
    p[1] << 0, Complex(0, -1), Complex(0, 1), 0;
    p[2] << 1, 0, 0, -1;
    return p;
  }();
  return s;
}

// 3x3 correlation matrix T_ij = tr[rho sigma_i (x) sigma_j].
inline Eigen::Matrix3d correlation_matrix(const Matrix4& rho) {
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      t(i, j) = (rho * kron2(paulis()[i], paulis()[j])).trace().real();
  return t;
}

}  // namespace detail

// S = tr[rho (A0 B0 + A0 B1 + A1 B0 - A1 B1)].
inline double chsh_value(const Matrix4& rho, const MeasurementSetting& ms) {
  const Matrix2 a0 = observable(ms.a0), a1 = observable(ms.a1);
  const Matrix2 b0 = observable(ms.b0), b1 = observable(ms.b1);
  const Matrix4 op = detail::kron2(a0, b0) + detail::kron2(a0, b1) +
                     detail::kron2(a1, b0) - detail::kron2(a1, b1);
  return (rho * op).trace().real();
}

// F |phi+><phi+| + (1-F) |phi-><phi-| over the basis {uu, ud, du, dd}.
inline Matrix4 state_from_fidelity(double f) {
  if (!(f >= 0.0 && f <= 1.0))
    throw std::domain_error("state_from_fidelity: F must lie in [0,1]");
  Matrix4 rho = Matrix4::Zero();
  rho(0, 0) = rho(3, 3) = 0.5;
  rho(0, 3) = rho(3, 0) = f - 0.5;
  return rho;
}

// Settings maximizing S on the dephased Bell mixture: A0 = z, A1 = x,
// receivers in the z-x plane at +/- theta with tan(theta) = 2F - 1.
inline MeasurementSetting optimal_settings(double f) {
  if (!(f >= 0.5 && f <= 1.0))
    throw std::domain_error("optimal_settings: F must lie in [1/2, 1]");
  const double theta = std::atan(2.0 * f - 1.0);
  MeasurementSetting ms;
  ms.a0 = Vec3(0, 0, 1);
  ms.a1 = Vec3(1, 0, 0);
  ms.b0 = Vec3(std::sin(theta), 0, std::cos(theta));
  ms.b1 = Vec3(-std::sin(theta), 0, std::cos(theta));
  return ms;
}

// Closed-form maximum of S for the dephased Bell mixture of fidelity F.
inline double s_max(double f) {
  if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("s_max: F must lie in [0,1]");
  const double c = 2.0 * f - 1.0;
  return 2.0 * std::sqrt(1.0 + c * c);
}

// Maximal CHSH value of an arbitrary two-qubit state: 2 sqrt(l1 + l2) with
// l1 >= l2 the two largest eigenvalues of T^T T.
inline double s_max_numeric(const Matrix4& rho) {
  const Eigen::Matrix3d t = detail::correlation_matrix(rho);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t,
                                                    Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();  // ascending
  return 2.0 * std::sqrt(std::max(0.0, ev[2] + ev[1]));
}

// Independent cross-check of s_max_numeric: sender settings fixed at z and x,
// receiver directions scanned over the sphere. The two receiver terms
// separate, so each is maximized on its own grid and refined locally.
inline double s_max_grid(const Matrix4& rho, int grid = 64, int passes = 2) {
  const Eigen::Matrix3d t = detail::correlation_matrix(rho);
  const Vec3 a0(0, 0, 1), a1(1, 0, 0);
  // E(a, b) = a^T T b; S = max_b0 [E(a0+a1, b0)] + max_b1 [E(a0-a1, b1)]
  auto best_receiver = [&](const Vec3& row) {
    double lo_th = 0.0, hi_th = std::numbers::pi;
    double lo_ph = 0.0, hi_ph = 2.0 * std::numbers::pi;
    double best = -1e300, best_th = 0.0, best_ph = 0.0;
    for (int pass = 0; pass <= passes; ++pass) {
      for (int i = 0; i <= grid; ++i) {
        const double th = lo_th + (hi_th - lo_th) * i / grid;
        for (int j = 0; j <= grid; ++j) {
          const double ph = lo_ph + (hi_ph - lo_ph) * j / grid;
          const Vec3 b(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                       std::cos(th));
          const double v = row.dot(b);
          if (v > best) best = v, best_th = th, best_ph = ph;
        }
      }
      const double dth = (hi_th - lo_th) / grid, dph = (hi_ph - lo_ph) / grid;
      lo_th = best_th - dth; hi_th = best_th + dth;
      lo_ph = best_ph - dph; hi_ph = best_ph + dph;
    }
    return best;
  };
  const Vec3 row0 = t.transpose() * (a0 + a1);
  const Vec3 row1 = t.transpose() * (a0 - a1);
  return best_receiver(row0) + best_receiver(row1);
}

// Best overlap with a Bell state reachable by local Z-frame relabeling: the
// four corrections {I, Z_A, Z_B, Z_A Z_B} only toggle between phi+ and phi-,
// so this is max(<phi+|rho|phi+>, <phi-|rho|phi->).
inline double fidelity_to_bell(const Matrix4& rho) {
  const double pop = 0.5 * (rho(0, 0).real() + rho(3, 3).real());
  const double coh = rho(0, 3).real();
  return pop + std::abs(coh);
}

}  // namespace catbell
