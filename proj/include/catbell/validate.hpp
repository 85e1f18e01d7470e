#pragma once

// Self-contained consistency suite behind the `validate` subcommand: every
// closed form is checked against an independent numerical path, and the core
// channel/POVM invariants are measured and reported with their residuals.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "catbell/bell.hpp"
#include "catbell/density.hpp"
#include "catbell/diqkd.hpp"
#include "catbell/fock.hpp"
#include "catbell/noise.hpp"
#include "catbell/protocol.hpp"
#include "catbell/usd.hpp"

namespace catbell {

struct ValidationCheck {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass() const { return residual <= tol; }
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.pass(); });
  }
};

inline ValidationReport run_validation() {
  ValidationReport rep;
  auto add = [&](const std::string& name, double residual, double tol) {
    rep.checks.push_back({name, residual, tol});
  };

  // closed-form maximal CHSH vs the correlation-matrix eigenvalue route
  {
    double worst = 0.0, worst_grid = 0.0;
    for (double f = 0.5; f <= 1.0 + 1e-12; f += 0.05) {
      const Matrix4 rho = state_from_fidelity(f);
      worst = std::max(worst, std::abs(s_max(f) - s_max_numeric(rho)));
      worst_grid = std::max(worst_grid, std::abs(s_max(f) - s_max_grid(rho)));
    }
    add("smax closed form vs eigenvalue method", worst, 1e-8);
    add("smax eigenvalue method vs grid search", worst_grid, 1e-6);
  }

  // optimal settings reproduce the closed form through the plain CHSH trace
  {
    double worst = 0.0;
    for (double f = 0.5; f <= 1.0 + 1e-12; f += 0.1) {
      const double s = chsh_value(state_from_fidelity(f), optimal_settings(f));
      worst = std::max(worst, std::abs(s - s_max(f)));
    }
    add("optimal settings attain smax", worst, 1e-9);
  }

  // analytic closed forms vs the Fock-space pipeline (single-component code)
  {
    double worst_f = 0.0, worst_p = 0.0;
    const UsdStrategy tub{};
    for (double a : {0.5, 1.0, 1.5, 2.0}) {
      for (double eta : {0.2, 0.5, 0.8, 1.0}) {
        const auto [f, p] = analytic_0loss(a, eta);
        const ProtocolOutcome pr =
            simulate_fock(0, a, eta, tub, auto_dim(a));
        worst_f = std::max(worst_f, std::abs(f - pr.fidelity));
        worst_p = std::max(worst_p, std::abs(p - pr.p_success));
      }
    }
    add("fock pipeline vs closed form: fidelity", worst_f, 1e-6);
    add("fock pipeline vs closed form: success prob", worst_p, 1e-6);
  }

  // discrimination POVM: completeness, no-error conditions, bound attainment
  {
    double worst_complete = 0.0, worst_noerr = 0.0, worst_attain = 0.0;
    const int dim = auto_dim(1.8);  // covers the largest amplitude below
    for (int i = 0; i < 10; ++i) {
      const double a = 0.4 + 0.15 * i;
      const FockVector p0 = coherent_state(Complex(a, 0.02 * i), dim);
      const FockVector p1 = coherent_state(Complex(-a, 0.33), dim);
      const UsdOutcome u = usd_povm(p0, p1);
      const Matrix sum = u.e0 + u.e1 + u.e_fail;
      worst_complete = std::max(
          worst_complete,
          (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff());
      worst_noerr = std::max(worst_noerr, std::abs(p1.dot(u.e0 * p1)));
      worst_noerr = std::max(worst_noerr, std::abs(p0.dot(u.e1 * p0)));
      const double attained =
          0.5 * (p0.dot(u.e0 * p0) + p1.dot(u.e1 * p1)).real();
      worst_attain = std::max(worst_attain, std::abs(attained - usd_bound(p0, p1)));
    }
    add("usd povm completeness", worst_complete, 1e-9);
    add("usd povm no-error conditions", worst_noerr, 1e-9);
    add("usd povm attains the bound", worst_attain, 1e-9);
  }

  // key-rate edge identities
  {
    add("chi at the quantum bound", std::abs(chi(kTsirelson)), 1e-12);
    add("chi at the classical bound", std::abs(chi(2.0) - 1.0), 1e-12);
    add("binary entropy at 1/2", std::abs(binary_entropy(0.5) - 1.0), 1e-12);
    add("key rate vanishes at S = 2",
        std::abs(secret_key_rate({2.0, 0.0, 1000.0}).skr), 1e-12);
  }

  // loss channel: Kraus completeness, trace preservation, photon contraction
  {
    add("loss kraus completeness (dim 40)",
        std::max(kraus_completeness_defect(0.37, 40),
                 kraus_completeness_defect(0.8, 40)),
        1e-8);
    double worst_tr = 0.0, worst_mean = 0.0, worst_coh = 0.0;
    for (double eta : {0.3, 0.6, 0.9}) {
      const int dim = auto_dim(1.7);
      const FockVector psi = coherent_state(1.7, dim);
      const Matrix rho = psi * psi.adjoint();
      const Matrix out = apply_loss_channel(rho, eta);
      worst_tr = std::max(worst_tr, std::abs(out.trace().real() - 1.0));
      worst_mean = std::max(
          worst_mean, std::abs((out.diagonal().real().array() *
                                Eigen::ArrayXd::LinSpaced(dim, 0, dim - 1))
                                   .sum() -
                               eta * mean_photon(psi)));
      const FockVector target = coherent_state(std::sqrt(eta) * 1.7, dim);
      worst_coh = std::max(
          worst_coh, std::abs(1.0 - (target.dot(out * target)).real()));
    }
    add("loss channel preserves trace", worst_tr, 1e-8);
    add("loss channel contracts mean photon number by eta", worst_mean, 1e-7);
    add("coherent states stay coherent under loss", worst_coh, 1e-7);
  }

  // coherent overlap identity over a small amplitude grid
  {
    double worst = 0.0;
    const int dim = choose_truncation(3.0, 1e-14) + kTruncationMargin;
    for (double b : {0.5, 1.5, 3.0})
      for (double g : {-2.0, 0.7, 2.5}) {
        const double got = std::abs(
            inner_product(coherent_state(b, dim), coherent_state(g, dim)));
        worst = std::max(worst, std::abs(got - std::exp(-0.5 * (b - g) * (b - g))));
      }
    add("coherent overlap identity", worst, 1e-7);
  }

  // syndrome distribution resolves unity; heralded state stays in the
  // two-branch family with balanced populations
  {
    double worst_sum = 0.0, worst_family = 0.0, worst_balance = 0.0;
    const UsdStrategy tub{};
    for (int m : {0, 1, 2}) {
      const ProtocolOutcome pr = simulate_fock(m, 1.3, 0.55, tub, auto_dim(1.3));
      double sum = 0.0;
      for (const auto& [j, p] : pr.syndrome_distribution) sum += p;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
          if (!((r == 0 || r == 3) && (c == 0 || c == 3)) && r != c)
            worst_family = std::max(worst_family, std::abs(pr.rho_ab(r, c)));
      worst_balance = std::max(
          worst_balance,
          std::abs(pr.rho_ab(0, 0).real() - pr.rho_ab(3, 3).real()));
    }
    add("syndrome probabilities sum to 1", worst_sum, 1e-8);
    add("heralded state confined to the Bell-coherence family", worst_family, 1e-7);
    add("heralded populations balanced", worst_balance, 1e-7);
  }

  // dephasing stays inside [1/2, F]
  {
    double worst = 0.0;
    for (double f : {0.5, 0.75, 1.0})
      for (double t : {0.0, 1e-5, 1e-2})
        for (double tc : {1e-4, 1e-2, 1.0}) {
          const double fp = dephase_fidelity(f, t, tc);
          worst = std::max(worst, std::max(0.5 - fp, fp - f));
        }
    add("dephasing bounded by [1/2, F]", worst, 0.0);
  }

  // cat codewords live on photon numbers = 0 mod 2^m
  {
    double worst = 0.0;
    for (int m : {1, 2}) {
      const CatCode code = make_cat_code(m, 1.4, auto_dim(1.4));
      const int mod = 1 << m;
      for (int n = 0; n < code.zero_word.size(); ++n)
        if (n % mod != 0)
          worst = std::max({worst, std::abs(code.zero_word[n]),
                            std::abs(code.one_word[n])});
    }
    add("cat codeword support on multiples of 2^m", worst, 1e-9);
  }

  return rep;
}

inline bool print_validation(std::ostream& os) {
  const ValidationReport rep = run_validation();
  for (const auto& c : rep.checks) {
    os << (c.pass() ? "PASS" : "FAIL") << "  " << std::left << std::setw(52)
       << c.name << " residual=" << std::scientific << std::setprecision(3)
       << c.residual << "  tol=" << c.tol << std::defaultfloat << "\n";
  }
  os << (rep.all_pass() ? "all checks passed" : "VALIDATION FAILED") << "\n";
  return rep.all_pass();
}

}  // namespace catbell
