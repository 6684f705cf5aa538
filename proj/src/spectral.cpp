#include "rgflow/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace rgflow {

namespace {

constexpr Real kPi = std::numbers::pi;

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::FFT<Real>& fft_engine() {
  // Plans are cached per transform size inside the engine.
  thread_local Eigen::FFT<Real> engine;
  return engine;
}

// Alternating-sign DFT wrappers implementing the continuous-transform
// convention on symmetric grids:
//   hat_k = dx * (-1)^k * sum_m (-1)^m f_m e^{-2 pi i k m / N}.
// The phase factor e^{-i pi N/2} is 1 because N is a power of two >= 16.
ArrayXc forward_transform(const ArrayXc& samples, const SpectralGrid& g) {
  const Index n = g.n_points;
  std::vector<Complex> buf(n), out(n);
  for (Index m = 0; m < n; ++m) buf[m] = (m & 1) ? -samples[m] : samples[m];
  fft_engine().fwd(out, buf);
  ArrayXc hat(n);
  const Real dx = g.delta_x();
  for (Index k = 0; k < n; ++k) hat[k] = ((k & 1) ? -dx : dx) * out[k];
  return hat;
}

ArrayXc inverse_transform(const ArrayXc& hat, const SpectralGrid& g) {
  const Index n = g.n_points;
  std::vector<Complex> buf(n), out(n);
  for (Index k = 0; k < n; ++k) buf[k] = (k & 1) ? -hat[k] : hat[k];
  fft_engine().inv(out, buf);  // includes the 1/N factor
  ArrayXc phys(n);
  const Real inv_dx = 1.0 / g.delta_x();
  for (Index m = 0; m < n; ++m) phys[m] = ((m & 1) ? -inv_dx : inv_dx) * out[m];
  return phys;
}

void require_same_grid(const SpectralFunction& a, const SpectralFunction& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("spectral: grid mismatch");
}

}  // namespace

Real SpectralGrid::delta_x() const { return kPi / omega_max; }
Real SpectralGrid::x_extent() const { return static_cast<Real>(n_points) * delta_x(); }

ArrayXr SpectralGrid::omegas() const {
  ArrayXr w(n_points);
  for (Index k = 0; k < n_points; ++k) w[k] = omega(k);
  return w;
}

ArrayXr SpectralGrid::xs() const {
  ArrayXr v(n_points);
  for (Index m = 0; m < n_points; ++m) v[m] = x(m);
  return v;
}

SpectralGrid make_grid(Real omega_max, Index n_points, int q) {
  if (!(omega_max > 0.0)) throw std::invalid_argument("make_grid: omega_max must be positive");
  if (n_points < 16 || !is_power_of_two(n_points))
    throw std::invalid_argument("make_grid: n_points must be a power of two >= 16");
  if (q < 2) throw std::invalid_argument("make_grid: q must be an integer > 1");
  return SpectralGrid{omega_max, n_points, q};
}

SpectralFunction zero_function(const SpectralGrid& grid) {
  return SpectralFunction{grid, ArrayXc::Zero(grid.n_points), ArrayXc::Zero(grid.n_points)};
}

SpectralFunction from_physical(const ArrayXr& samples, const SpectralGrid& grid) {
  if (samples.size() != grid.n_points)
    throw std::invalid_argument("from_physical: sample count does not match grid");
  ArrayXc f = samples.cast<Complex>();
  ArrayXc xf(grid.n_points);
  const Complex minus_i(0.0, -1.0);
  for (Index m = 0; m < grid.n_points; ++m) xf[m] = minus_i * grid.x(m) * samples[m];
  SpectralFunction out;
  out.grid = grid;
  out.hat = forward_transform(f, grid);
  out.hat_deriv = forward_transform(xf, grid);
  return out;
}

ArrayXr to_physical(const SpectralFunction& f) {
  return inverse_transform(f.hat, f.grid).real();
}

ArrayXc to_physical_complex(const ArrayXc& hat, const SpectralGrid& grid) {
  return inverse_transform(hat, grid);
}

BqNormInfo bq_norm_info(const SpectralFunction& f) {
  const Index n = f.grid.n_points;
  BqNormInfo info;
  for (Index k = 0; k < n; ++k) {
    const Real w = f.grid.omega(k);
    const Real weight = 1.0 + std::pow(std::abs(w), f.grid.q);
    const Real v = weight * (std::abs(f.hat[k]) + std::abs(f.hat_deriv[k]));
    if (v > info.value) {
      info.value = v;
      info.argmax = k;
    }
  }
  info.boundary_dominated = std::abs(f.grid.omega(info.argmax)) >= 0.9 * f.grid.omega_max;
  return info;
}

Real bq_norm(const SpectralFunction& f) { return bq_norm_info(f).value; }

Complex hat_at_zero(const SpectralFunction& f) { return f.hat[f.grid.zero_index()]; }

Index pad_factor(int j) {
  // Factor 2 suffices for j <= 4 with decaying spectra; higher powers get
  // proportional padding (band j*omega_max, wrap-free needs P >= (j+1)/2).
  return std::max<Index>(2, (static_cast<Index>(j) + 2) / 2);
}

ArrayXr to_physical_padded(const SpectralFunction& f, Index pad) {
  const Index n = f.grid.n_points;
  const SpectralGrid padded{f.grid.omega_max * static_cast<Real>(pad), pad * n, f.grid.q};
  const Index offset = (pad - 1) * n / 2;
  ArrayXc hat_p = ArrayXc::Zero(padded.n_points);
  hat_p.segment(offset, n) = f.hat;
  // The base row at -omega_max has no mirror on the base grid; split it
  // across +-omega_max so the padded array stays exactly Hermitian.
  hat_p[offset] = 0.5 * f.hat[0];
  hat_p[offset + n] = std::conj(hat_p[offset]);
  return inverse_transform(hat_p, padded).real();
}

SpectralFunction from_physical_padded(const ArrayXr& samples, const SpectralGrid& base, Index pad) {
  const Index n = base.n_points;
  const SpectralGrid padded{base.omega_max * static_cast<Real>(pad), pad * n, base.q};
  SpectralFunction big = from_physical(samples, padded);
  SpectralFunction out;
  out.grid = base;
  out.hat = big.hat.segment((pad - 1) * n / 2, n);
  out.hat_deriv = big.hat_deriv.segment((pad - 1) * n / 2, n);
  return out;
}

SpectralFunction pointwise_power(const SpectralFunction& f, int j) {
  if (j < 2) throw std::invalid_argument("pointwise_power: j must be >= 2");
  const Index pad = pad_factor(j);
  ArrayXr phys = to_physical_padded(f, pad);
  ArrayXr powered = phys;
  for (int i = 1; i < j; ++i) powered *= phys;
  return from_physical_padded(powered, f.grid, pad);
}

Complex interpolate(const ArrayXc& values, const SpectralGrid& grid, Real w) {
  const Index n = grid.n_points;
  const Real u = (w + grid.omega_max) / grid.delta_omega();
  Index i = static_cast<Index>(std::floor(u));
  if (i < 0) i = 0;
  if (i > n - 1) i = n - 1;
  const Real theta = u - static_cast<Real>(i);
  if (theta == 0.0) return values[i];  // node hit: exact

  Index j0 = i - 2;
  if (j0 < 0) j0 = 0;
  if (j0 > n - 6) j0 = n - 6;

  // 6-point Lagrange in index coordinates.
  Complex acc(0.0, 0.0);
  for (Index a = 0; a < 6; ++a) {
    const Real xa = static_cast<Real>(j0 + a);
    Real weight = 1.0;
    for (Index b = 0; b < 6; ++b) {
      if (b == a) continue;
      const Real xb = static_cast<Real>(j0 + b);
      weight *= (u - xb) / (xa - xb);
    }
    acc += weight * values[j0 + a];
  }
  return acc;
}

SpectralFunction rescale(const SpectralFunction& f, Real s) {
  if (s < 1.0) throw std::invalid_argument("rescale: s must be >= 1 (compression only)");
  const Index n = f.grid.n_points;
  SpectralFunction out;
  out.grid = f.grid;
  out.hat.resize(n);
  out.hat_deriv.resize(n);
  const Real inv_s = 1.0 / s;
  for (Index k = 0; k < n; ++k) {
    const Real w = f.grid.omega(k) * inv_s;
    out.hat[k] = interpolate(f.hat, f.grid, w);
    out.hat_deriv[k] = inv_s * interpolate(f.hat_deriv, f.grid, w);
  }
  return out;
}

Real hermitian_defect(const SpectralFunction& f) {
  const Index n = f.grid.n_points;
  Real worst = std::abs(f.hat[0].imag());  // w = -omega_max has no mirror node
  worst = std::max(worst, std::abs(f.hat[n / 2].imag()));
  for (Index k = 1; k < n; ++k)
    worst = std::max(worst, std::abs(f.hat[n - k] - std::conj(f.hat[k])));
  return worst;
}

SpectralFunction operator+(const SpectralFunction& a, const SpectralFunction& b) {
  require_same_grid(a, b);
  return SpectralFunction{a.grid, a.hat + b.hat, a.hat_deriv + b.hat_deriv};
}

SpectralFunction operator-(const SpectralFunction& a, const SpectralFunction& b) {
  require_same_grid(a, b);
  return SpectralFunction{a.grid, a.hat - b.hat, a.hat_deriv - b.hat_deriv};
}

SpectralFunction operator*(Real c, const SpectralFunction& f) {
  return SpectralFunction{f.grid, c * f.hat, c * f.hat_deriv};
}

}  // namespace rgflow
