#pragma once

// Truncated photon-number-basis states: coherent states and the
// rotation-symmetric cat codewords built from 2^m coherent components.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace catbell {

using Complex = std::complex<double>;

// Amplitudes over the photon-number basis {|0>, ..., |dim-1>}.
using FockVector = Eigen::VectorXcd;

inline constexpr double kDefaultTruncationEps = 1e-12;

// Extra levels added on top of choose_truncation() when a dimension is picked
// automatically, so that downstream channel applications stay comfortably
// inside the reliably represented subspace.
inline constexpr int kTruncationMargin = 5;

// Smallest dimension such that the Poisson(|alpha|^2) mass at the top two
// represented levels and beyond is already below eps. Floored at 4 so vacuum
// and near-vacuum states still get a few levels to live on.
inline int choose_truncation(double abs_alpha, double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("choose_truncation: eps must lie in (0,1)");
  const double lambda = abs_alpha * abs_alpha;
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  int n = 0;
  // walk the pmf until the remaining tail P(N > n) drops below eps;
  // cdf saturates to 1 in floating point, so this always terminates
  while (1.0 - cdf >= eps && n < 100000) {
    ++n;
    pmf *= lambda / n;
    cdf += pmf;
  }
  // tail beyond level n is < eps; two spare levels keep the stored state's
  // own top-two mass below eps as well
  return std::max(n + 3, 4);
}

// |alpha> amplitudes e^{-|a|^2/2} a^n / sqrt(n!) via the stable recurrence
// amps[n] = amps[n-1] * alpha / sqrt(n), renormalized over the truncated
// basis. Rejects dimensions too small for the requested truncation accuracy.
inline FockVector coherent_state(Complex alpha, int dim,
                                 double eps = kDefaultTruncationEps) {
  if (dim < choose_truncation(std::abs(alpha), eps))
    throw std::invalid_argument(
        "coherent_state: dim=" + std::to_string(dim) +
        " too small for |alpha|=" + std::to_string(std::abs(alpha)));
  FockVector v(dim);
  v[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt(double(n));
  v.normalize();
  return v;
}

// <a|b> with the physics convention (conjugate-linear in the first slot).
inline Complex inner_product(const FockVector& a, const FockVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner_product: dimension mismatch");
  return a.dot(b);
}

// Sum_n n |amps[n]|^2.
inline double mean_photon(const FockVector& v) {
  double s = 0.0;
  for (int n = 1; n < v.size(); ++n) s += n * std::norm(v[n]);
  return s;
}

// Probability mass at levels n >= from.
inline double tail_mass(const FockVector& v, int from) {
  double s = 0.0;
  for (int n = std::max(from, 0); n < v.size(); ++n) s += std::norm(v[n]);
  return s;
}

// Codeword of the 2^m-component cat code: an equal superposition of coherent
// components at phases 2k*pi/2^m (bit 0) or (2k+1)*pi/2^m (bit 1). Both
// codewords are supported on photon numbers n = 0 (mod 2^m). The squared norm
// of the plain component sum (the code's normalization constant) is written
// to norm_const when given; it is the same for both codewords.
inline FockVector cat_codeword(int m, Complex alpha, int bit, int dim,
                               double* norm_const = nullptr,
                               double eps = kDefaultTruncationEps) {
  if (m < 0 || m > 2)
    throw std::invalid_argument("cat_codeword: supported code indices are m = 0, 1, 2");
  if (bit != 0 && bit != 1)
    throw std::invalid_argument("cat_codeword: bit must be 0 or 1");
  const int comps = 1 << m;
  FockVector sum = FockVector::Zero(dim);
  for (int k = 0; k < comps; ++k) {
    const double phase = std::numbers::pi * (2.0 * k + bit) / comps;
    sum += coherent_state(alpha * std::exp(Complex(0.0, phase)), dim, eps);
  }
  const double n2 = sum.squaredNorm();
  if (norm_const) *norm_const = n2;
  if (n2 <= 0.0)
    throw std::runtime_error("cat_codeword: components cancel to numerical zero");
  return sum / std::sqrt(n2);
}

// Loss-order-m code bundle: both codewords plus the shared normalization
// constant, at a common truncation.
struct CatCode {
  int m = 0;
  Complex alpha{0.0, 0.0};
  FockVector zero_word;
  FockVector one_word;
  double norm_const = 0.0;  // squared norm of the unnormalized component sum
};

inline CatCode make_cat_code(int m, Complex alpha, int dim,
                             double eps = kDefaultTruncationEps) {
  CatCode c;
  c.m = m;
  c.alpha = alpha;
  c.zero_word = cat_codeword(m, alpha, 0, dim, &c.norm_const, eps);
  c.one_word = cat_codeword(m, alpha, 1, dim, nullptr, eps);
  return c;
}

}  // namespace catbell
