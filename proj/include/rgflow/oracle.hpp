#pragma once

// Direct time-marching solver for the original integral equation on [1, T],
// independent of the RG machinery.  The march propagates by exact frequency
// multipliers over a geometric time grid and adds a predictor-corrector
// trapezoid Duhamel term per interval.  Alongside plain snapshots, each
// trajectory keeps its Duhamel representation (the initial data plus the
// transformed nonlinear history), so rescaled snapshots
//   v_t(x) = t^{(p+1)/d} u(t^{(p+1)/d} x, t)
// can be formed by compressed-argument evaluation without losing resolution
// when the solution concentrates near w = 0.

#include "rgflow/kernel.hpp"
#include "rgflow/nonlinearity.hpp"
#include "rgflow/spectral.hpp"
#include "rgflow/timescale.hpp"

#include <vector>

namespace rgflow {

struct DuhamelEntry {
  Real t = 1.0;       // evaluation time of F
  Real s_at_t = 0.0;  // s(t) there
  Real weight = 0.0;  // quadrature weight, lambda and dt/2 included
  ArrayXc f_hat;      // transform of F(u(., t))
  ArrayXc f_hat_deriv;
};

struct Trajectory {
  SpectralGrid grid;
  std::vector<Real> times;     // geometric, starting at 1
  std::vector<Real> s_values;  // s(times[m])
  std::vector<SpectralFunction> snaps;
  std::vector<DuhamelEntry> history;        // empty for lambda = 0
  std::vector<std::size_t> history_count;   // entries contributing to snap m
};

/// March to time T > 1 with steps_per_octave intervals per doubling of t.
/// Aborts (AnalyticityError / NumericalError) when F leaves its radius or
/// the physical amplitude grows past 10x the initial one.
Trajectory march(const SpectralFunction& f, Real T, int steps_per_octave,
                 const KernelSpec& k, const TimeScale& ts, const NonlinearitySpec& spec);

struct RescaledError {
  Real value = 0.0;
  Real snapshot_time = 1.0;
  bool exact_time = true;  // false when the nearest snapshot was substituted
};

/// bq_norm( t^{(p+1)/d} u(t^{(p+1)/d} ., t) - A f_p^* ), the rescaling done
/// in frequency by compression w -> w / t^{(p+1)/d} applied to the
/// trajectory's Duhamel representation.
RescaledError rescaled_error(const Trajectory& traj, Real t, Real A, const KernelSpec& k,
                             Real p);

/// The rescaled snapshot itself (the oracle's view of the renormalized data
/// f_n when t = L^n).
SpectralFunction rescaled_snapshot(const Trajectory& traj, Real t, const KernelSpec& k, Real p);

}  // namespace rgflow
