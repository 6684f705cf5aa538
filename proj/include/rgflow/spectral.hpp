#pragma once

// Frequency-domain representation of functions of one real variable.
//
// A function f is carried as samples of its Fourier transform
//   f_hat(w) = \int f(x) e^{-iwx} dx
// together with samples of the transform derivative f_hat'(w), taken on a
// uniform symmetric frequency grid that contains w = 0 exactly.  With this
// convention a probability kernel has f_hat(0) = 1, so mass bookkeeping at
// w = 0 is exact.  The companion physical grid is the unique one for which
// the discrete transform pair below is exactly invertible
// (dx * dw * N = 2*pi).

#include "rgflow/types.hpp"

namespace rgflow {

struct SpectralGrid {
  Real omega_max = 0.0;  // frequencies span [-omega_max, omega_max)
  Index n_points = 0;    // even power of two, >= 16
  int q = 2;             // decay exponent of the B_q norm, >= 2

  Real delta_omega() const { return 2.0 * omega_max / static_cast<Real>(n_points); }
  Real delta_x() const;                      // pi / omega_max
  Real x_extent() const;                     // n_points * delta_x
  Index zero_index() const { return n_points / 2; }
  Real omega(Index k) const { return -omega_max + static_cast<Real>(k) * delta_omega(); }
  Real x(Index m) const { return static_cast<Real>(m - zero_index()) * delta_x(); }
  ArrayXr omegas() const;
  ArrayXr xs() const;

  bool operator==(const SpectralGrid&) const = default;
};

/// Validated grid constructor.  Rejects non-positive omega_max, n_points that
/// is not an even power of two >= 16, and q <= 1.
SpectralGrid make_grid(Real omega_max, Index n_points, int q);

struct SpectralFunction {
  SpectralGrid grid;
  ArrayXc hat;        // f_hat(w_k)
  ArrayXc hat_deriv;  // f_hat'(w_k), the transform of (-i x) f(x)
};

SpectralFunction zero_function(const SpectralGrid& grid);

/// Riemann-sum transform of real physical samples on the companion grid
/// x_m = (m - N/2) * dx.  hat_deriv is the transform of (-i x) f(x).
SpectralFunction from_physical(const ArrayXr& samples, const SpectralGrid& grid);

/// Inverse transform.  Returns the real part; inputs are expected to be
/// Hermitian-symmetric (real-valued in physical space).
ArrayXr to_physical(const SpectralFunction& f);

/// Inverse transform of one hat array without symmetry assumptions.
ArrayXc to_physical_complex(const ArrayXc& hat, const SpectralGrid& grid);

struct BqNormInfo {
  Real value = 0.0;
  Index argmax = 0;
  bool boundary_dominated = false;  // max attained at |w| >= 0.9 * omega_max
};

/// Discrete B_q norm: max over grid nodes of
/// (1 + |w|^q) * (|f_hat(w)| + |f_hat'(w)|).
Real bq_norm(const SpectralFunction& f);
BqNormInfo bq_norm_info(const SpectralFunction& f);

Complex hat_at_zero(const SpectralFunction& f);

/// Pointwise physical-space power u^j (j >= 2), evaluated pseudo-spectrally
/// on a zero-padded grid to suppress aliasing; the result carries a
/// refreshed hat_deriv.
SpectralFunction pointwise_power(const SpectralFunction& f, int j);

/// Physical samples of f on the pad-fold refinement of its grid (same
/// window, pad * n_points samples, frequency extent pad * omega_max).
ArrayXr to_physical_padded(const SpectralFunction& f, Index pad);

/// Transform physical samples on the pad-fold refinement back to the base
/// grid's frequency band.
SpectralFunction from_physical_padded(const ArrayXr& samples, const SpectralGrid& base, Index pad);

/// Dealiasing pad factor for a pointwise power of order j.
Index pad_factor(int j);

/// Spatial rescaling g(x) -> s * g(s x) for s >= 1; in frequency
/// hat_new(w) = hat(w / s), deriv_new(w) = hat_deriv(w / s) / s.
/// Compression only: target frequencies stay interior, no extrapolation.
SpectralFunction rescale(const SpectralFunction& f, Real s);

/// Local 6-point Lagrange interpolation of grid samples at frequency w
/// (|w| <= omega_max).  Exact at grid nodes.
Complex interpolate(const ArrayXc& values, const SpectralGrid& grid, Real w);

/// Max deviation from Hermitian symmetry f_hat(-w) = conj(f_hat(w)).
Real hermitian_defect(const SpectralFunction& f);

// Elementwise arithmetic; grids must match.
SpectralFunction operator+(const SpectralFunction& a, const SpectralFunction& b);
SpectralFunction operator-(const SpectralFunction& a, const SpectralFunction& b);
SpectralFunction operator*(Real c, const SpectralFunction& f);

}  // namespace rgflow
