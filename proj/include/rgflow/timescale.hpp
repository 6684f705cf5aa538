#pragma once

// The time reparametrization
//   s(t) = (t^{p+1} - 1)/(p+1) + r(t),   s(1) = 0,
// i.e. s(t) = int_1^t c(tau) dtau with c(t) = t^p + o(t^p), together with
// its block-rescaled versions
//   s_n(t) = (t^{p+1} - 1)/(p+1) + r_n(t),
//   r_n(t) = (r(L^n t) - r(L^n)) / L^{n(p+1)}.

#include "rgflow/types.hpp"

#include <functional>
#include <vector>

namespace rgflow {

enum class RModel { zero, power, table };

struct TimeScale {
  Real p = 1.0;
  RModel model = RModel::zero;
  // power model: r(t) = b (t^{p+1-gamma} - 1)/(p+1-gamma), gamma > 0
  // (b ln t when gamma = p+1), i.e. c(t) = t^p + b t^{p-gamma}.
  Real b = 0.0;
  Real gamma = 1.0;
  // table model: user c(t), integrated by adaptive Simpson quadrature
  std::function<Real(Real)> c;
};

TimeScale zero_timescale(Real p);
TimeScale power_timescale(Real p, Real b, Real gamma);
TimeScale table_timescale(Real p, std::function<Real(Real)> c);

Real s(const TimeScale& ts, Real t);    // t >= 1
Real r(const TimeScale& ts, Real t);    // s(t) minus the power-law core
Real r_n(const TimeScale& ts, int n, Real L, Real t);
Real s_n(const TimeScale& ts, int n, Real L, Real t);  // 1 <= t <= L

struct WindowReport {
  bool pass = false;
  Real lower = 0.0;   // 1 / (6 (p+1))
  Real upper = 0.0;   // 3 / (2 (p+1))
  std::vector<Real> ratios;  // s_n(L) / L^{p+1} for n = 0..n_max
  // Smallest L > 1 for which the window holds for all n in range, located by
  // bisection to 1e-3; NaN if none found below the search cap.
  Real smallest_L = 0.0;
};

WindowReport check_window(const TimeScale& ts, Real L, int n_max);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b, Real tol);

}  // namespace rgflow
