#include "rgflow/nonlinearity.hpp"

#include <cmath>

namespace rgflow {

NonlinearitySpec make_nonlinearity(Real lambda, int alpha, std::vector<Real> coeffs, Real rho) {
  if (!(lambda >= -1.0 && lambda <= 1.0))
    throw std::invalid_argument("nonlinearity: lambda must lie in [-1, 1]");
  if (alpha < 2) throw std::invalid_argument("nonlinearity: alpha must be an integer >= 2");
  if (coeffs.empty() || coeffs.front() == 0.0)
    throw std::invalid_argument("nonlinearity: a_alpha must be nonzero");
  if (!(rho > 0.0)) throw std::invalid_argument("nonlinearity: rho must be positive");
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Real scaled = std::abs(coeffs[i]) * std::pow(rho, static_cast<Real>(alpha + i));
    if (!std::isfinite(scaled))
      throw std::invalid_argument("nonlinearity: |a_j| rho^j not finite; radius inconsistent");
  }
  return NonlinearitySpec{lambda, alpha, std::move(coeffs), rho};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::irrelevant: return "irrelevant";
    case Verdict::marginal: return "marginal";
    case Verdict::relevant: return "relevant";
  }
  return "?";
}

Classification classify(int alpha, Real p, Real d) {
  if (!(p > 0.0) && p != 0.0) throw std::invalid_argument("classify: p must be >= 0");
  if (!(d > 0.0)) throw std::invalid_argument("classify: d must be positive");
  if (alpha < 2) throw std::invalid_argument("classify: alpha must be an integer >= 2");
  Classification c;
  c.alpha_c = (p + 1.0 + d) / (p + 1.0);
  c.d_F = -static_cast<Real>(alpha) * (p + 1.0) + (p + 1.0) + d;
  if (c.d_F < 0.0)
    c.verdict = Verdict::irrelevant;
  else if (c.d_F == 0.0)
    c.verdict = Verdict::marginal;
  else
    c.verdict = Verdict::relevant;
  return c;
}

Real lambda_n(const NonlinearitySpec& spec, int n, Real L, Real p, Real d) {
  if (n < 0) throw std::invalid_argument("lambda_n: n must be >= 0");
  if (!(L > 1.0)) throw std::invalid_argument("lambda_n: L must be > 1");
  const Classification c = classify(spec.alpha, p, d);
  if (c.verdict == Verdict::relevant)
    throw std::invalid_argument("lambda_n: relevant nonlinearity, flow refused");
  return std::pow(L, static_cast<Real>(n) * c.d_F / d) * spec.lambda;
}

std::vector<Real> rescaled_coeffs(const NonlinearitySpec& spec, int n, Real L, Real p, Real d) {
  if (n < 0) throw std::invalid_argument("rescaled_coeffs: n must be >= 0");
  if (!(L > 1.0)) throw std::invalid_argument("rescaled_coeffs: L must be > 1");
  const Classification c = classify(spec.alpha, p, d);
  if (c.verdict == Verdict::relevant)
    throw std::invalid_argument("rescaled_coeffs: relevant nonlinearity, flow refused");
  std::vector<Real> out(spec.coeffs.size());
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    const Real shift = -static_cast<Real>(i);  // alpha - j
    out[i] = spec.coeffs[i] * std::pow(L, static_cast<Real>(n) * shift * (p + 1.0) / d);
  }
  return out;
}

SpectralFunction evaluate_series(const std::vector<Real>& coeffs, int alpha, Real rho,
                                 Real lambda_eff, const SpectralFunction& u) {
  if (coeffs.empty()) throw std::invalid_argument("evaluate_series: empty coefficient list");
  if (alpha < 2) throw std::invalid_argument("evaluate_series: alpha must be >= 2");
  if (lambda_eff == 0.0) return zero_function(u.grid);

  const int top = alpha + static_cast<int>(coeffs.size()) - 1;
  const Index pad = pad_factor(top);
  ArrayXr phys = to_physical_padded(u, pad);

  const Real amplitude = phys.abs().maxCoeff();
  if (amplitude >= rho)
    throw AnalyticityError("evaluate_series: |u| reached the declared radius rho");

  // Horner over the coefficient window, then the leading power u^alpha.
  ArrayXr acc = ArrayXr::Constant(phys.size(), coeffs.back());
  for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) acc = acc * phys + coeffs[i];
  for (int i = 0; i < alpha; ++i) acc *= phys;

  SpectralFunction out = from_physical_padded(acc, u.grid, pad);
  return lambda_eff * out;
}

}  // namespace rgflow
