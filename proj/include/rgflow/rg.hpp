#pragma once

// The block renormalization group for the integral equation
//   u(x,t) = (G(., s(t)) * f)(x)
//          + lambda int_1^t (G(., s(t)-s(tau)) * F(u(., tau)))(x) dtau.
//
// One RG step solves the renormalized equation on the block t in [1, L] from
// data f_n, then rescales amplitude and space by L^{(p+1)/d}.  The linear
// part is the frequency multiplier
//   (R0_{L,n} g)^hat(w) = G_hat(w / L^{(p+1)/d}, s_n(L)) g_hat(w / L^{(p+1)/d});
// the nonlinear correction nu_n is built by Picard iteration on a uniform
// time grid with trapezoid Duhamel weights.  States track the decomposition
//   f_n = A_n R0_{L^n} f_p^* + g_n,   g_n_hat(0) = 0,
// whose contraction drives convergence of rescaled solutions to A f_p^*.

#include "rgflow/kernel.hpp"
#include "rgflow/nonlinearity.hpp"
#include "rgflow/spectral.hpp"
#include "rgflow/timescale.hpp"
#include "rgflow/util.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rgflow {

struct PicardOptions {
  Real tol = 1e-12;       // sup over block times of bq_norm(increment)
  int max_iter = 50;
  int substeps = 64;      // uniform time steps on [1, L]
  // Small-data admission: bq_norm(f_n) must stay below sigma unless
  // overridden; overrides are recorded as warnings and the measured Picard
  // contraction ratio keeps being monitored.
  Real sigma = std::numeric_limits<Real>::infinity();
  // Analyticity admission from the series radius (rho0-based norm proxy).
  Real norm_cap = std::numeric_limits<Real>::infinity();
  bool small_data_override = false;
};

struct RGStepReport {
  Real nu_hat_zero = 0.0;      // nu_n_hat(0), the amplitude increment
  int picard_iters = 0;
  Real picard_residual = 0.0;  // last increment norm
  Real contraction_ratio = 0.0;  // max measured ratio of successive increments
  Real bq_f = 0.0;             // norms of the post-step state
  Real bq_g = 0.0;
  std::vector<std::string> warnings;
};

struct RGState {
  int n = 0;
  Real L = 2.0;
  SpectralFunction f_n;
  Real A_n = 0.0;
  SpectralFunction g_n;
  Real lambda_n = 0.0;
  // R0_{L^n} f_p^*, iterated alongside the flow; unit mass at w = 0.
  SpectralFunction profile_n;
};

/// State at n = 0: A_0 = f_hat(0), g_0 = f - A_0 f_p^*.
RGState initial_state(const SpectralFunction& f0, Real L, const KernelSpec& k,
                      const TimeScale& ts, const NonlinearitySpec& spec);

/// One application of the linear RG operator R0_{L,n} (p comes from ts).
SpectralFunction linear_rg_apply(const SpectralFunction& g, int n, Real L,
                                 const KernelSpec& k, const TimeScale& ts);

struct LinearFlowStep {
  int n = 0;
  Real t = 1.0;   // L^n
  Real A = 0.0;
  Real bq_g = 0.0;
  Real err_to_profile = 0.0;  // bq_norm(f_n - A f_p^*)
};

/// Pure linear flow f_{n+1} = R0_{L,n} f_n with per-step decomposition
/// diagnostics; A = f0_hat(0) is constant along it.
std::vector<LinearFlowStep> linear_flow(const SpectralFunction& f0, int steps, Real L,
                                        const KernelSpec& k, const TimeScale& ts);

struct RenormalizedSolution {
  SpectralFunction u_at_L;  // u_n(., L)
  SpectralFunction nu;      // u_n(., L) - u_{f_n}(., L)
  RGStepReport report;
};

/// Picard solution of the block-n renormalized equation on [1, L].
/// Evaluates F_{L,n} with block-rescaled coefficients and lambda_n.
/// Throws NumericalError on non-convergence, AnalyticityError when the
/// solution leaves the radius of F.
RenormalizedSolution solve_renormalized(const SpectralFunction& f_n, int n, Real L,
                                        const KernelSpec& k, const TimeScale& ts,
                                        const NonlinearitySpec& spec,
                                        const PicardOptions& opts);

/// One full RG step: f_{n+1} = R0_{L,n} f_n + L^{(p+1)/d} nu_n(L^{(p+1)/d} .),
/// A_{n+1} = A_n + nu_n_hat(0), g re-established with g_hat(0) = 0.
std::pair<RGState, RGStepReport> rg_step(const RGState& state, const KernelSpec& k,
                                         const TimeScale& ts, const NonlinearitySpec& spec,
                                         const PicardOptions& opts);

// Explicit constants of the contraction/existence machinery, every sup
// evaluated as a grid maximum.  Diagnostics, not certified bounds.
struct TheoryConstants {
  Real K = 0.0;        // sup |G_hat(w,1)|
  Real K1 = 0.0;       // sup |G_hat'(w,1)|
  Real C_dpq = 0.0;    // bq_norm bound for f_p^*
  Real K_tilde = 0.0;  // bound for R0_{L^n} f_p^*
  Real M = 0.0;        // asymptotic fixed point drift constant
  Real A_factor = 0.0; // A(d,p,q) of the contraction constant
  Real C = 0.0;        // contraction constant
  Real rho0 = 0.0;
  Real S_rho0 = 0.0;
  Real C_tilde = 0.0;
  Real M_tilde = 0.0;
  Real sigma = 0.0;
  std::vector<Real> epsilon_n;  // n = 0..n_max
  Real epsilon_bar = 0.0;
  Real D = 0.0;
  Real L_delta = 0.0;
  Real L1 = 0.0;       // smallest L passing the s_n(L) window bound
  Real alpha_c = 0.0;
  Real d_F = 0.0;
  Real delta = 0.0;
};

/// delta defaults to the midpoint of the interval allowed by
/// (1-delta)(p+1) < alpha(p+1) - (p+1+d); an explicit delta outside it is
/// rejected.
TheoryConstants theory_constants(const KernelSpec& k, const TimeScale& ts,
                                 const NonlinearitySpec& spec, const SpectralGrid& grid,
                                 Real L, std::optional<Real> delta = std::nullopt,
                                 int n_max = 20);

struct FlowRow {
  int n = 0;
  Real t = 1.0;
  Real A_n = 0.0;
  Real bq_g_n = 0.0;
  Real bq_f_n = 0.0;
  Real err_to_Afpstar = 0.0;   // bq_norm(f_n - A_inf f_p^*)
  Real theory_rate_g = 0.0;    // idealized per-step factor L^{-(p+1)/d}
  Real theory_rate_A = 0.0;    // lambda rescaling factor L^{d_F/d}
};

struct ConvergenceReport {
  std::vector<FlowRow> rows;
  Real A_infinity = 0.0;   // A at the final step
  Real A_tail_bound = 0.0; // geometric extrapolation of the last increment
  LineFit g_decay;         // fit of log bq_g_n vs n
  LineFit dA_decay;        // fit of log |A_{n+1} - A_n| vs n
  std::vector<RGStepReport> step_reports;
  std::vector<std::string> warnings;
  bool aborted = false;    // a step failed; rows cover the completed prefix
  std::string abort_reason;
};

struct FlowOptions {
  Real L = 2.0;
  int n_steps = 10;
  Real picard_tol = 1e-12;
  int picard_max_iter = 50;
  int substeps = 64;
  bool small_data_override = false;
};

/// The per-step states of the flow, for cross-validation against the direct
/// solver.  On a step failure the completed prefix is returned and
/// abort_reason (if given) is set.
std::vector<RGState> flow_states(const SpectralFunction& f0, const KernelSpec& k,
                                 const TimeScale& ts, const NonlinearitySpec& spec,
                                 const FlowOptions& opts,
                                 std::vector<RGStepReport>* step_reports = nullptr,
                                 std::vector<std::string>* warnings = nullptr,
                                 std::string* abort_reason = nullptr);

/// The full nonlinear flow.  Refuses marginal and relevant nonlinearities;
/// admission uses the computed epsilon_bar unless overridden.  A mid-flow
/// numerical failure yields a partial report with aborted = true.
ConvergenceReport run_flow(const SpectralFunction& f0, const KernelSpec& k,
                           const TimeScale& ts, const NonlinearitySpec& spec,
                           const FlowOptions& opts);

/// The contraction constant C(d,p,q) alone (grid maxima).
Real contraction_constant(const KernelSpec& k, const SpectralGrid& grid, Real p);

/// Seeded family of smooth mean-zero test functions
/// g_hat(w) = sum_{m=1..4} a_m (i w)^m exp(-beta w^2), g_hat(0) = 0.
std::vector<SpectralFunction> mean_zero_family(const SpectralGrid& grid, int count,
                                               unsigned long seed);

struct ContractionStudy {
  std::vector<Real> Ls;
  std::vector<std::vector<Real>> ratios;  // [L index][family index]
  std::vector<Real> worst;                // per-L worst ratio
  std::vector<Real> bound;                // C / L^{(p+1)/d} per L
  Real C = 0.0;
  LineFit slope;  // log worst vs log L; contraction predicts -(p+1)/d
  bool all_below_bound = false;
};

/// Measured one-step contraction ratios of R0_{L,0} over a seeded mean-zero
/// family, swept over block sizes Ls.
ContractionStudy contraction_study(const SpectralGrid& grid, const KernelSpec& k,
                                   const TimeScale& ts, const std::vector<Real>& Ls,
                                   int family_size, unsigned long seed);

}  // namespace rgflow
