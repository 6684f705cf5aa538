#include "rgflow/timescale.hpp"

#include <cmath>
#include <limits>

namespace rgflow {

namespace {

Real power_core(Real p, Real t) { return (std::pow(t, p + 1.0) - 1.0) / (p + 1.0); }

Real simpson(Real a, Real b, Real fa, Real fm, Real fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Real simpson_rec(const std::function<Real(Real)>& f, Real a, Real m, Real b, Real fa, Real fm,
                 Real fb, Real whole, Real tol, int depth) {
  const Real lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Real flm = f(lm), frm = f(rm);
  const Real left = simpson(a, m, fa, flm, fm);
  const Real right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Real adaptive_simpson(const std::function<Real(Real)>& f, Real a, Real b, Real tol) {
  if (a == b) return 0.0;
  const Real m = 0.5 * (a + b);
  const Real fa = f(a), fm = f(m), fb = f(b);
  return simpson_rec(f, a, m, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

TimeScale zero_timescale(Real p) {
  if (!(p > 0.0)) throw std::invalid_argument("timescale: p must be positive");
  return TimeScale{p, RModel::zero, 0.0, 1.0, {}};
}

TimeScale power_timescale(Real p, Real b, Real gamma) {
  if (!(p > 0.0)) throw std::invalid_argument("timescale: p must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("timescale: gamma must be positive");
  return TimeScale{p, RModel::power, b, gamma, {}};
}

TimeScale table_timescale(Real p, std::function<Real(Real)> c) {
  if (!(p > 0.0)) throw std::invalid_argument("timescale: p must be positive");
  if (!c) throw std::invalid_argument("timescale: table model needs c(t)");
  return TimeScale{p, RModel::table, 0.0, 1.0, std::move(c)};
}

Real r(const TimeScale& ts, Real t) {
  if (!(t >= 1.0)) throw std::invalid_argument("timescale: t must be >= 1");
  switch (ts.model) {
    case RModel::zero:
      return 0.0;
    case RModel::power: {
      const Real e = ts.p + 1.0 - ts.gamma;
      if (e == 0.0) return ts.b * std::log(t);
      return ts.b * (std::pow(t, e) - 1.0) / e;
    }
    case RModel::table:
      // s enters multiplier exponents; quadrature error is kept far below
      // spectral error.
      return adaptive_simpson(ts.c, 1.0, t, 1e-10) - power_core(ts.p, t);
  }
  return 0.0;
}

Real s(const TimeScale& ts, Real t) {
  if (!(t >= 1.0)) throw std::invalid_argument("timescale: t must be >= 1");
  return power_core(ts.p, t) + r(ts, t);
}

Real r_n(const TimeScale& ts, int n, Real L, Real t) {
  if (n < 0) throw std::invalid_argument("timescale: n must be >= 0");
  if (!(L > 1.0)) throw std::invalid_argument("timescale: L must be > 1");
  if (ts.model == RModel::zero) return 0.0;
  const Real Ln = std::pow(L, static_cast<Real>(n));
  return (r(ts, Ln * t) - r(ts, Ln)) / std::pow(L, static_cast<Real>(n) * (ts.p + 1.0));
}

Real s_n(const TimeScale& ts, int n, Real L, Real t) {
  constexpr Real slack = 1e-12;
  if (!(t >= 1.0 - slack && t <= L + slack))
    throw std::invalid_argument("timescale: s_n needs t in [1, L]");
  return power_core(ts.p, t) + r_n(ts, n, L, t);
}

namespace {

bool window_holds(const TimeScale& ts, Real L, int n_max, std::vector<Real>* ratios) {
  const Real lower = 1.0 / (6.0 * (ts.p + 1.0));
  const Real upper = 3.0 / (2.0 * (ts.p + 1.0));
  bool ok = true;
  for (int n = 0; n <= n_max; ++n) {
    const Real ratio = s_n(ts, n, L, L) / std::pow(L, ts.p + 1.0);
    if (ratios) ratios->push_back(ratio);
    if (!(ratio > lower && ratio < upper)) ok = false;
  }
  return ok;
}

}  // namespace

WindowReport check_window(const TimeScale& ts, Real L, int n_max) {
  if (!(L > 1.0)) throw std::invalid_argument("check_window: L must be > 1");
  WindowReport report;
  report.lower = 1.0 / (6.0 * (ts.p + 1.0));
  report.upper = 3.0 / (2.0 * (ts.p + 1.0));
  report.pass = window_holds(ts, L, n_max, &report.ratios);

  // Smallest L for which the window holds across n = 0..n_max.
  Real hi = report.pass ? L : std::max(L, 2.0);
  bool found = report.pass;
  for (int i = 0; i < 64 && !found; ++i) {
    hi *= 2.0;
    found = window_holds(ts, hi, n_max, nullptr);
    if (hi > 1e12) break;
  }
  if (!found) {
    report.smallest_L = std::numeric_limits<Real>::quiet_NaN();
    return report;
  }
  Real lo = 1.0 + 1e-9;
  if (window_holds(ts, lo, n_max, nullptr)) {
    report.smallest_L = lo;
    return report;
  }
  while (hi - lo > 1e-3) {
    const Real mid = 0.5 * (lo + hi);
    (window_holds(ts, mid, n_max, nullptr) ? hi : lo) = mid;
  }
  report.smallest_L = hi;
  return report;
}

}  // namespace rgflow
