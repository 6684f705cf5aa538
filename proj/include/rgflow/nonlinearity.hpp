#pragma once

// The nonlinear term F(u) = lambda sum_{j>=alpha} a_j u^j, its scaling
// classification, and the block-n rescaled images
//   lambda_n = L^{n d_F / d} lambda,         d_F = -alpha(p+1) + p+1 + d,
//   F_{L,n}(u) = sum_j a_j L^{n(alpha-j)(p+1)/d} u^j.

#include "rgflow/spectral.hpp"
#include "rgflow/types.hpp"

#include <vector>

namespace rgflow {

struct NonlinearitySpec {
  Real lambda = 0.0;          // in [-1, 1]
  int alpha = 2;              // lowest power, integer >= 2
  std::vector<Real> coeffs;   // a_alpha .. a_J
  Real rho = 1.0;             // declared convergence radius
};

/// Validated constructor: a_alpha != 0, lambda in [-1,1], alpha >= 2, rho > 0,
/// |a_j| rho^j finite.
NonlinearitySpec make_nonlinearity(Real lambda, int alpha, std::vector<Real> coeffs, Real rho);

enum class Verdict { irrelevant, marginal, relevant };

struct Classification {
  Real alpha_c = 0.0;  // (p+1+d)/(p+1)
  Real d_F = 0.0;      // -alpha(p+1) + p+1 + d
  Verdict verdict = Verdict::irrelevant;
};

const char* to_string(Verdict v);

Classification classify(int alpha, Real p, Real d);

/// lambda_n; refuses relevant nonlinearities.
Real lambda_n(const NonlinearitySpec& spec, int n, Real L, Real p, Real d);

/// a_j -> a_j L^{n(alpha-j)(p+1)/d}; the j = alpha coefficient is unchanged.
std::vector<Real> rescaled_coeffs(const NonlinearitySpec& spec, int n, Real L, Real p, Real d);

/// lambda_eff * sum_j a_j u^j evaluated pseudo-spectrally on a padded grid.
/// Throws AnalyticityError when the physical amplitude reaches rho.
/// lambda_eff == 0 returns the exact zero function.
SpectralFunction evaluate_series(const std::vector<Real>& coeffs, int alpha, Real rho,
                                 Real lambda_eff, const SpectralFunction& u);

}  // namespace rgflow
