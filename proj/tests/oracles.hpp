#pragma once

// Independent reference computations used to freeze expected test values:
// dense scans for sups, Simpson quadrature, direct numerical convolutions,
// and the closed-form Fourier solution of the linear equation.  Nothing here
// touches the implementation paths under test.

#include "rgflow/types.hpp"

#include <cmath>
#include <functional>

namespace oracles {

using rgflow::Complex;
using rgflow::Real;

/// sup over [-W, W] via a dense uniform scan with n+1 points.
inline Real dense_sup(const std::function<Real(Real)>& fn, Real W, int n = 1000000) {
  Real best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const Real w = -W + 2.0 * W * static_cast<Real>(i) / static_cast<Real>(n);
    best = std::max(best, fn(w));
  }
  return best;
}

/// Composite Simpson with n panels (n made even).
inline Real simpson(const std::function<Real(Real)>& fn, Real a, Real b, int n) {
  if (n % 2) ++n;
  const Real h = (b - a) / n;
  Real acc = fn(a) + fn(b);
  for (int i = 1; i < n; ++i) acc += fn(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

/// (u * u)(w) for u_hat(eta) = exp(-eta^2), by direct quadrature.
inline Real gaussian_self_convolution(Real w) {
  return simpson([w](Real eta) { return std::exp(-eta * eta - (w - eta) * (w - eta)); },
                 -20.0, 20.0, 40000);
}

/// (u * u * u)(w) for u_hat(eta) = exp(-eta^2), by nested quadrature.
inline Real gaussian_triple_convolution(Real w) {
  return simpson(
      [w](Real eta) {
        return simpson(
            [w, eta](Real xi) {
              const Real tail = w - eta - xi;
              return std::exp(-eta * eta - xi * xi - tail * tail);
            },
            -9.0, 9.0, 600);
      },
      -9.0, 9.0, 600);
}

/// Least-squares slope of log y against log x.
inline Real loglog_slope(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const Real denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace oracles
