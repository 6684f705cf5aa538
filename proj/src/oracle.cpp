#include "rgflow/oracle.hpp"

#include <cmath>

namespace rgflow {

Trajectory march(const SpectralFunction& f, Real T, int steps_per_octave,
                 const KernelSpec& k, const TimeScale& ts, const NonlinearitySpec& spec) {
  if (!(T > 1.0)) throw std::invalid_argument("march: T must be > 1");
  if (steps_per_octave < 1) throw std::invalid_argument("march: steps_per_octave must be >= 1");

  const Real log2T = std::log2(T);
  const int M = std::max(1, static_cast<int>(std::lround(steps_per_octave * log2T)));

  Trajectory traj;
  traj.grid = f.grid;
  traj.times.resize(M + 1);
  traj.s_values.resize(M + 1);
  for (int m = 0; m <= M; ++m) {
    traj.times[m] = std::exp2(static_cast<Real>(m) * log2T / static_cast<Real>(M));
    traj.s_values[m] = s(ts, traj.times[m]);
  }
  traj.snaps.reserve(M + 1);
  traj.snaps.push_back(f);
  traj.history_count.assign(M + 1, 0);

  const ArrayXr om = f.grid.omegas();
  const Real lam = spec.lambda;
  const Real init_amp = lam == 0.0 ? 0.0 : to_physical(f).abs().maxCoeff();

  for (int m = 0; m < M; ++m) {
    const Real ds = traj.s_values[m + 1] - traj.s_values[m];
    const Real dt = traj.times[m + 1] - traj.times[m];
    const ArrayXc G = multiplier_values(k, om, ds).cast<Complex>();
    const ArrayXc Gd = multiplier_deriv_values(k, om, ds).cast<Complex>();
    const SpectralFunction& u = traj.snaps.back();

    SpectralFunction next;
    next.grid = f.grid;
    if (lam == 0.0) {
      next.hat = G * u.hat;
      next.hat_deriv = Gd * u.hat + G * u.hat_deriv;
    } else {
      const SpectralFunction F0 = evaluate_series(spec.coeffs, spec.alpha, spec.rho, 1.0, u);
      // Predictor: left-endpoint Duhamel propagated through the interval.
      SpectralFunction pred{f.grid, G * (u.hat + lam * dt * F0.hat),
                            ArrayXc::Zero(f.grid.n_points)};
      const SpectralFunction F1 = evaluate_series(spec.coeffs, spec.alpha, spec.rho, 1.0, pred);
      const Real h = lam * 0.5 * dt;
      next.hat = G * u.hat + h * (G * F0.hat + F1.hat);
      next.hat_deriv = Gd * u.hat + G * u.hat_deriv +
                       h * (Gd * F0.hat + G * F0.hat_deriv + F1.hat_deriv);

      traj.history.push_back({traj.times[m], traj.s_values[m], h, F0.hat, F0.hat_deriv});
      traj.history.push_back({traj.times[m + 1], traj.s_values[m + 1], h, F1.hat, F1.hat_deriv});

      const Real amp = to_physical(next).abs().maxCoeff();
      if (amp > 10.0 * init_amp)
        throw NumericalError("march: physical amplitude grew past 10x the initial one "
                             "(blow-up; configuration outside the small-data regime)");
    }
    traj.snaps.push_back(std::move(next));
    traj.history_count[m + 1] = traj.history.size();
  }
  return traj;
}

namespace {

std::size_t nearest_snapshot(const Trajectory& traj, Real t, bool* exact) {
  std::size_t best = 0;
  Real best_err = std::abs(traj.times[0] - t);
  for (std::size_t m = 1; m < traj.times.size(); ++m) {
    const Real err = std::abs(traj.times[m] - t);
    if (err < best_err) {
      best = m;
      best_err = err;
    }
  }
  if (exact) *exact = best_err <= 1e-9 * std::abs(t);
  return best;
}

}  // namespace

SpectralFunction rescaled_snapshot(const Trajectory& traj, Real t, const KernelSpec& k, Real p) {
  bool exact = false;
  const std::size_t m = nearest_snapshot(traj, t, &exact);
  const Real tt = traj.times[m];
  const Real st = traj.s_values[m];
  const Real scale = std::pow(tt, (p + 1.0) / k.d);
  const SpectralGrid& grid = traj.grid;
  const SpectralFunction& f0 = traj.snaps.front();
  const std::size_t n_hist = traj.history_count[m];

  SpectralFunction v = zero_function(grid);
  const Real inv_scale = 1.0 / scale;
  for (Index j = 0; j < grid.n_points; ++j) {
    const Real w = grid.omega(j) * inv_scale;
    const Real g = multiplier_value(k, w, st);
    const Real gd = multiplier_deriv_value(k, w, st);
    const Complex fh = interpolate(f0.hat, grid, w);
    const Complex fd = interpolate(f0.hat_deriv, grid, w);
    Complex hat = g * fh;
    Complex deriv = gd * fh + g * fd;
    for (std::size_t e = 0; e < n_hist; ++e) {
      const DuhamelEntry& entry = traj.history[e];
      const Real dse = st - entry.s_at_t;
      const Real ge = multiplier_value(k, w, dse);
      const Real gde = multiplier_deriv_value(k, w, dse);
      const Complex Fh = interpolate(entry.f_hat, grid, w);
      const Complex Fd = interpolate(entry.f_hat_deriv, grid, w);
      hat += entry.weight * ge * Fh;
      deriv += entry.weight * (gde * Fh + ge * Fd);
    }
    v.hat[j] = hat;
    v.hat_deriv[j] = inv_scale * deriv;
  }
  return v;
}

RescaledError rescaled_error(const Trajectory& traj, Real t, Real A, const KernelSpec& k,
                             Real p) {
  RescaledError out;
  const std::size_t m = nearest_snapshot(traj, t, &out.exact_time);
  out.snapshot_time = traj.times[m];
  const SpectralFunction v = rescaled_snapshot(traj, traj.times[m], k, p);
  out.value = bq_norm(v - A * fpstar(k, p, traj.grid));
  return out;
}

}  // namespace rgflow
