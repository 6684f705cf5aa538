#include "rgflow/kernel.hpp"

#include "rgflow/util.hpp"

#include <algorithm>
#include <cmath>

namespace rgflow {

namespace {

Real exponent_arg(const KernelSpec& k, Real omega) {
  // The gaussian family always has exponent 2; spec.d enters the time
  // scaling law only, so the validator can catch a corrupted declaration.
  if (k.family == KernelFamily::gaussian) return omega * omega;
  return std::pow(std::abs(omega), k.d);
}

Real family_exponent(const KernelSpec& k) {
  return k.family == KernelFamily::gaussian ? 2.0 : k.d;
}

// |w|^{e-1} * sgn(w), with the odd-symmetry value 0 at w = 0.
Real signed_power(Real omega, Real e) {
  if (omega == 0.0) return 0.0;
  const Real mag = std::pow(std::abs(omega), e - 1.0);
  return omega > 0.0 ? mag : -mag;
}

}  // namespace

KernelSpec gaussian_kernel(int q_decl, int m_decl) {
  if (q_decl <= 1 || m_decl <= 0)
    throw std::invalid_argument("gaussian_kernel: need integers q > 1 and M > 0");
  return KernelSpec{KernelFamily::gaussian, 2.0, q_decl, m_decl};
}

KernelSpec stable_kernel(Real d, int q_decl, int m_decl) {
  if (!(d > 0.0 && d < 2.0))
    throw std::invalid_argument("stable_kernel: d must lie in (0, 2)");
  if (q_decl <= 1 || m_decl <= 0)
    throw std::invalid_argument("stable_kernel: need integers q > 1 and M > 0");
  return KernelSpec{KernelFamily::stable, d, q_decl, m_decl};
}

Complex multiplier(const KernelSpec& k, Real omega, Real t) {
  if (!(t > 0.0)) throw std::invalid_argument("multiplier: t must be positive");
  return Complex(std::exp(-t * exponent_arg(k, omega)), 0.0);
}

Complex multiplier_deriv(const KernelSpec& k, Real omega, Real t) {
  if (!(t > 0.0)) throw std::invalid_argument("multiplier_deriv: t must be positive");
  const Real e = family_exponent(k);
  const Real value = std::exp(-t * exponent_arg(k, omega));
  return Complex(-t * e * signed_power(omega, e) * value, 0.0);
}

ArrayXr multiplier_values(const KernelSpec& k, const ArrayXr& omegas, Real t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_values: t must be >= 0");
  if (t == 0.0) return ArrayXr::Ones(omegas.size());
  if (k.family == KernelFamily::gaussian) return (-t * omegas.square()).exp();
  return (-t * omegas.abs().pow(k.d)).exp();
}

ArrayXr multiplier_deriv_values(const KernelSpec& k, const ArrayXr& omegas, Real t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_deriv_values: t must be >= 0");
  if (t == 0.0) return ArrayXr::Zero(omegas.size());
  const Real e = family_exponent(k);
  ArrayXr signed_pow(omegas.size());
  for (Index i = 0; i < omegas.size(); ++i) signed_pow[i] = signed_power(omegas[i], e);
  return (-t * e) * signed_pow * multiplier_values(k, omegas, t);
}

Real multiplier_value(const KernelSpec& k, Real omega, Real t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_value: t must be >= 0");
  if (t == 0.0) return 1.0;
  return std::exp(-t * exponent_arg(k, omega));
}

Real multiplier_deriv_value(const KernelSpec& k, Real omega, Real t) {
  if (t < 0.0) throw std::invalid_argument("multiplier_deriv_value: t must be >= 0");
  if (t == 0.0) return 0.0;
  const Real e = family_exponent(k);
  return -t * e * signed_power(omega, e) * std::exp(-t * exponent_arg(k, omega));
}

Real kernel_exponent(const KernelSpec& k) { return family_exponent(k); }

SpectralFunction fpstar(const KernelSpec& k, Real p, const SpectralGrid& grid) {
  if (!(p > 0.0)) throw std::invalid_argument("fpstar: p must be positive");
  const Real t = 1.0 / (p + 1.0);
  SpectralFunction f;
  f.grid = grid;
  ArrayXr om = grid.omegas();
  f.hat = multiplier_values(k, om, t).cast<Complex>();
  f.hat_deriv = multiplier_deriv_values(k, om, t).cast<Complex>();
  return f;
}

bool HypothesisReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const HypothesisCheck& c) { return c.pass; });
}

const HypothesisCheck& HypothesisReport::check(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return c;
  throw std::invalid_argument("HypothesisReport: no check named " + id);
}

HypothesisReport validate_hypotheses(const KernelSpec& k, const SpectralGrid& grid,
                                     const std::vector<Real>& t_samples, Real tol) {
  if (t_samples.empty()) throw std::invalid_argument("validate_hypotheses: t_samples empty");
  for (Real t : t_samples)
    if (!(t > 0.0)) throw std::invalid_argument("validate_hypotheses: t_samples must be positive");

  HypothesisReport report;
  const ArrayXr om = grid.omegas();
  const Index n = grid.n_points;

  // (i) decay: G^(j)(x,1) by spectral differentiation, boundedness of
  // (1+|x|)^{M+2} |G^(j)| probed as a tail-slope condition slope <= -(M+2).
  {
    const Complex i_unit(0.0, 1.0);
    const ArrayXc base_hat = multiplier_values(k, om, 1.0).cast<Complex>();
    const ArrayXr xs = grid.xs();
    const Real half = 0.5 * grid.x_extent();
    const Real fit_lo = 0.1 * half, fit_hi = 0.3 * half;
    Real worst = 0.0;
    Real tail_exp = std::numeric_limits<Real>::quiet_NaN();
    for (int j = 0; j <= k.q_decl + 1; ++j) {
      ArrayXc hat_j = base_hat;
      for (int a = 0; a < j; ++a) hat_j *= (i_unit * om).cast<Complex>();
      const ArrayXr gj = to_physical_complex(hat_j, grid).real().abs();
      const Real floor = 1e-13 * gj.maxCoeff();
      std::vector<Real> xs_fit, ys_fit;
      for (Index m = 0; m < n; ++m) {
        const Real ax = std::abs(xs[m]);
        if (ax >= fit_lo && ax <= fit_hi && gj[m] > floor) {
          xs_fit.push_back(ax);
          ys_fit.push_back(gj[m]);
        }
      }
      if (xs_fit.size() < 8) continue;  // decays below the floor: passes
      const LineFit fit = fit_loglog(xs_fit, ys_fit);
      if (j == 0) tail_exp = -fit.slope;
      worst = std::max(worst, std::max(0.0, fit.slope + static_cast<Real>(k.m_decl + 2)));
    }
    report.tail_exponent = tail_exp;
    report.checks.push_back({"G1_decay", worst, 0.05, worst < 0.05});
  }

  // (ii) scaling: G_hat(w,t) vs G_hat(t^{1/d} w, 1) with the declared d.
  {
    Real worst = 0.0;
    for (Real t : t_samples) {
      const Real scale = std::pow(t, 1.0 / k.d);
      const ArrayXr lhs = multiplier_values(k, om, t);
      const ArrayXr rhs = multiplier_values(k, ArrayXr(scale * om), 1.0);
      worst = std::max(worst, (lhs - rhs).abs().maxCoeff());
    }
    report.checks.push_back({"G2_scaling", worst, tol, worst < tol});
  }

  // (iii) Chapman-Kolmogorov in frequency.
  {
    Real worst = 0.0;
    for (Real t : t_samples)
      for (Real ss : t_samples) {
        if (!(t > ss)) continue;
        const ArrayXr lhs = multiplier_values(k, om, t);
        const ArrayXr rhs = multiplier_values(k, om, t - ss) * multiplier_values(k, om, ss);
        worst = std::max(worst, (lhs - rhs).abs().maxCoeff());
      }
    report.checks.push_back({"G3_semigroup", worst, tol, worst < tol});
  }

  // (iv) nonnegativity and non-triviality of the physical density at t = 1.
  {
    const ArrayXr g1 = to_physical_complex(multiplier_values(k, om, 1.0).cast<Complex>(), grid).real();
    const Real neg = std::max(0.0, -g1.minCoeff());
    const bool nonzero = g1.abs().maxCoeff() > 0.0;
    report.checks.push_back({"G4_nonnegativity", neg, tol, nonzero && neg < tol});
  }

  // normalization: unit mass at every sampled time.
  {
    Real worst = 0.0;
    for (Real t : t_samples)
      worst = std::max(worst, std::abs(multiplier(k, 0.0, t) - Complex(1.0, 0.0)));
    report.checks.push_back({"normalization", worst, tol, worst < tol});
  }

  return report;
}

std::pair<Real, Real> constants_K_K1(const KernelSpec& k, const SpectralGrid& grid) {
  const ArrayXr om = grid.omegas();
  const Real K = multiplier_values(k, om, 1.0).abs().maxCoeff();
  const Real K1 = multiplier_deriv_values(k, om, 1.0).abs().maxCoeff();
  return {K, K1};
}

}  // namespace rgflow
