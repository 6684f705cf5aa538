#include "rgflow/rg.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace rgflow {

namespace {

constexpr Real kPi = std::numbers::pi;

Real grid_weighted_sup(const SpectralGrid& grid, const ArrayXr& values) {
  Real best = 0.0;
  for (Index i = 0; i < grid.n_points; ++i) {
    const Real w = 1.0 + std::pow(std::abs(grid.omega(i)), grid.q);
    best = std::max(best, w * values[i]);
  }
  return best;
}

}  // namespace

SpectralFunction linear_rg_apply(const SpectralFunction& g, int n, Real L,
                                 const KernelSpec& k, const TimeScale& ts) {
  if (!(L > 1.0)) throw std::invalid_argument("linear_rg_apply: L must be > 1");
  const Real scale = std::pow(L, (ts.p + 1.0) / k.d);
  const Real T = s_n(ts, n, L, L);
  const SpectralGrid& grid = g.grid;
  const Index npts = grid.n_points;

  ArrayXr compressed(npts);
  for (Index j = 0; j < npts; ++j) compressed[j] = grid.omega(j) / scale;
  const ArrayXr mult = multiplier_values(k, compressed, T);
  const ArrayXr mult_d = multiplier_deriv_values(k, compressed, T);

  SpectralFunction out;
  out.grid = grid;
  out.hat.resize(npts);
  out.hat_deriv.resize(npts);
  const Real inv_scale = 1.0 / scale;
  for (Index j = 0; j < npts; ++j) {
    const Complex gh = interpolate(g.hat, grid, compressed[j]);
    const Complex gd = interpolate(g.hat_deriv, grid, compressed[j]);
    out.hat[j] = mult[j] * gh;
    out.hat_deriv[j] = inv_scale * (mult_d[j] * gh + mult[j] * gd);
  }
  return out;
}

RGState initial_state(const SpectralFunction& f0, Real L, const KernelSpec& k,
                      const TimeScale& ts, const NonlinearitySpec& spec) {
  RGState st;
  st.n = 0;
  st.L = L;
  st.f_n = f0;
  st.A_n = hat_at_zero(f0).real();
  st.profile_n = fpstar(k, ts.p, f0.grid);
  st.g_n = f0 - st.A_n * st.profile_n;
  st.lambda_n = spec.lambda;
  return st;
}

std::vector<LinearFlowStep> linear_flow(const SpectralFunction& f0, int steps, Real L,
                                        const KernelSpec& k, const TimeScale& ts) {
  if (steps < 1) throw std::invalid_argument("linear_flow: steps must be >= 1");
  const SpectralFunction profile0 = fpstar(k, ts.p, f0.grid);
  const Real A = hat_at_zero(f0).real();

  std::vector<LinearFlowStep> rows;
  SpectralFunction f = f0;
  SpectralFunction profile = profile0;
  Real t = 1.0;
  for (int n = 0; n <= steps; ++n) {
    LinearFlowStep row;
    row.n = n;
    row.t = t;
    row.A = A;
    row.bq_g = bq_norm(f - A * profile);
    row.err_to_profile = bq_norm(f - A * profile0);
    rows.push_back(row);
    if (n == steps) break;
    f = linear_rg_apply(f, n, L, k, ts);
    profile = linear_rg_apply(profile, n, L, k, ts);
    t *= L;
  }
  return rows;
}

RenormalizedSolution solve_renormalized(const SpectralFunction& f_n, int n, Real L,
                                        const KernelSpec& k, const TimeScale& ts,
                                        const NonlinearitySpec& spec,
                                        const PicardOptions& opts) {
  const SpectralGrid& grid = f_n.grid;
  const Index npts = grid.n_points;
  const int S = opts.substeps;
  if (S < 1) throw std::invalid_argument("solve_renormalized: substeps must be >= 1");

  RenormalizedSolution sol;
  RGStepReport& report = sol.report;

  const Real lam_n = lambda_n(spec, n, L, ts.p, k.d);
  if (lam_n != 0.0) {
    // Both admission guards concern the nonlinear term; the lambda = 0 block
    // is solved exactly by the multiplier and needs neither.
    const Real bq_fn = bq_norm(f_n);
    if (!(bq_fn < opts.sigma)) {
      if (!opts.small_data_override)
        throw NumericalError("solve_renormalized: bq_norm(f_n) exceeds the small-data bound sigma");
      std::ostringstream msg;
      msg << "small-data guard overridden at step " << n << ": bq_norm(f_n) = " << bq_fn
          << " >= sigma = " << opts.sigma;
      report.warnings.push_back(msg.str());
    }
    if (!(bq_fn < opts.norm_cap))
      throw AnalyticityError("solve_renormalized: bq_norm(f_n) exceeds the analyticity cap");
  }
  const std::vector<Real> coeffs_n = rescaled_coeffs(spec, n, L, ts.p, k.d);
  const ArrayXr om = grid.omegas();

  std::vector<Real> tt(S + 1), sn(S + 1);
  for (int i = 0; i <= S; ++i) {
    tt[i] = 1.0 + (L - 1.0) * static_cast<Real>(i) / static_cast<Real>(S);
    sn[i] = s_n(ts, n, L, tt[i]);
  }

  // Linear block solution u_{f_n} at every time node.
  std::vector<ArrayXc> lin_hat(S + 1), lin_deriv(S + 1);
  for (int i = 0; i <= S; ++i) {
    const ArrayXr G = multiplier_values(k, om, sn[i]);
    const ArrayXr Gd = multiplier_deriv_values(k, om, sn[i]);
    lin_hat[i] = G.cast<Complex>() * f_n.hat;
    lin_deriv[i] = Gd.cast<Complex>() * f_n.hat + G.cast<Complex>() * f_n.hat_deriv;
  }

  if (lam_n == 0.0) {
    sol.u_at_L = SpectralFunction{grid, lin_hat[S], lin_deriv[S]};
    sol.nu = zero_function(grid);
    report.picard_iters = 1;
    report.picard_residual = 0.0;
    report.contraction_ratio = 0.0;
    report.nu_hat_zero = 0.0;
    return sol;
  }

  const Real dt = (L - 1.0) / static_cast<Real>(S);

  // Picard iteration on the correction c = u - u_{f_n}; the ball of the
  // existence lemma is centered at the linear solution, so c starts at 0.
  std::vector<ArrayXc> c_hat(S + 1, ArrayXc::Zero(npts));
  std::vector<ArrayXc> c_deriv(S + 1, ArrayXc::Zero(npts));

  bool converged = false;
  Real prev_inc = -1.0;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    std::vector<ArrayXc> F_hat(S + 1), F_deriv(S + 1);
    for (int i = 0; i <= S; ++i) {
      SpectralFunction u{grid, lin_hat[i] + c_hat[i], lin_deriv[i] + c_deriv[i]};
      SpectralFunction F = evaluate_series(coeffs_n, spec.alpha, spec.rho, 1.0, u);
      F_hat[i] = std::move(F.hat);
      F_deriv[i] = std::move(F.hat_deriv);
    }

    Real inc_max = 0.0;
    for (int i = S; i >= 0; --i) {
      ArrayXc acc_h = ArrayXc::Zero(npts);
      ArrayXc acc_d = ArrayXc::Zero(npts);
      if (i > 0) {
        for (int j = 0; j <= i; ++j) {
          const Real w = dt * ((j == 0 || j == i) ? 0.5 : 1.0);
          if (j == i) {
            acc_h += w * F_hat[j];
            acc_d += w * F_deriv[j];
          } else {
            const ArrayXr G = multiplier_values(k, om, sn[i] - sn[j]);
            const ArrayXr Gd = multiplier_deriv_values(k, om, sn[i] - sn[j]);
            acc_h += w * (G.cast<Complex>() * F_hat[j]);
            acc_d += w * (Gd.cast<Complex>() * F_hat[j] + G.cast<Complex>() * F_deriv[j]);
          }
        }
      }
      acc_h *= lam_n;
      acc_d *= lam_n;
      SpectralFunction diff{grid, acc_h - c_hat[i], acc_d - c_deriv[i]};
      inc_max = std::max(inc_max, bq_norm(diff));
      c_hat[i] = std::move(acc_h);
      c_deriv[i] = std::move(acc_d);
    }

    report.picard_iters = iter;
    report.picard_residual = inc_max;
    if (iter >= 2 && prev_inc > 0.0)
      report.contraction_ratio = std::max(report.contraction_ratio, inc_max / prev_inc);
    prev_inc = inc_max;
    if (inc_max < opts.tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NumericalError("solve_renormalized: Picard iteration did not converge within max_iter");

  sol.u_at_L = SpectralFunction{grid, lin_hat[S] + c_hat[S], lin_deriv[S] + c_deriv[S]};
  sol.nu = SpectralFunction{grid, c_hat[S], c_deriv[S]};
  report.nu_hat_zero = hat_at_zero(sol.nu).real();
  return sol;
}

std::pair<RGState, RGStepReport> rg_step(const RGState& state, const KernelSpec& k,
                                         const TimeScale& ts, const NonlinearitySpec& spec,
                                         const PicardOptions& opts) {
  RenormalizedSolution sol =
      solve_renormalized(state.f_n, state.n, state.L, k, ts, spec, opts);

  const Real scale = std::pow(state.L, (ts.p + 1.0) / k.d);
  RGState next;
  next.n = state.n + 1;
  next.L = state.L;
  next.f_n = linear_rg_apply(state.f_n, state.n, state.L, k, ts) + rescale(sol.nu, scale);
  next.profile_n = linear_rg_apply(state.profile_n, state.n, state.L, k, ts);
  next.A_n = state.A_n + sol.report.nu_hat_zero;
  next.g_n = next.f_n - next.A_n * next.profile_n;
  next.lambda_n = state.lambda_n * std::pow(state.L, classify(spec.alpha, ts.p, k.d).d_F / k.d);

  RGStepReport report = sol.report;
  report.bq_f = bq_norm(next.f_n);
  report.bq_g = bq_norm(next.g_n);
  return {std::move(next), std::move(report)};
}

Real contraction_constant(const KernelSpec& k, const SpectralGrid& grid, Real p) {
  const ArrayXr om = grid.omegas();
  const ArrayXr g1 = multiplier_values(k, om, 1.0).abs();
  const ArrayXr g1d = multiplier_deriv_values(k, om, 1.0).abs();
  const Real K = g1.maxCoeff();
  const Real K1 = g1d.maxCoeff();
  const Real d = k.d;
  const Real A_factor = std::pow(6.0 * (p + 1.0), (1.0 + grid.q) / d) *
                        (K * std::pow(2.0 + 6.0 * (p + 1.0), 1.0 / d) + K1 * std::pow(8.0, 1.0 / d));
  const ArrayXr integrand = om.abs() * g1 + om.abs() * g1d + g1;
  return A_factor * grid_weighted_sup(grid, integrand);
}

TheoryConstants theory_constants(const KernelSpec& k, const TimeScale& ts,
                                 const NonlinearitySpec& spec, const SpectralGrid& grid,
                                 Real L, std::optional<Real> delta_opt, int n_max) {
  if (!(L > 1.0)) throw std::invalid_argument("theory_constants: L must be > 1");
  TheoryConstants tc;
  const Real p = ts.p;
  const Real d = k.d;
  const Real q = static_cast<Real>(grid.q);

  const ArrayXr om = grid.omegas();
  const ArrayXr g1 = multiplier_values(k, om, 1.0).abs();
  const ArrayXr g1d = multiplier_deriv_values(k, om, 1.0).abs();
  tc.K = g1.maxCoeff();
  tc.K1 = g1d.maxCoeff();

  const Real sup_pair = grid_weighted_sup(grid, g1 + g1d);
  tc.C_dpq = std::pow(p + 1.0, q / d) * sup_pair;
  tc.K_tilde = std::pow(6.0 * (p + 1.0), q / d) *
               (tc.K + 7.0 * tc.K1 / (3.0 * (p + 1.0))) * sup_pair;
  tc.M = tc.K1 * std::pow(p + 1.0, q / d) * (1.0 + std::pow(p + 1.0, 1.0 / d)) *
         grid_weighted_sup(grid, (om.abs() + 1.0) * g1 + om.abs() * g1d);
  tc.A_factor = std::pow(6.0 * (p + 1.0), (1.0 + q) / d) *
                (tc.K * std::pow(2.0 + 6.0 * (p + 1.0), 1.0 / d) +
                 tc.K1 * std::pow(8.0, 1.0 / d));
  tc.C = tc.A_factor * grid_weighted_sup(grid, om.abs() * g1 + om.abs() * g1d + g1);

  // rho0 = 2 pi rho [(2^{q+1}+3) I_q]^{-1} with I_q = int dx/(1+|x|^q).
  const Real Iq = (2.0 * kPi / q) / std::sin(kPi / q);
  tc.rho0 = 2.0 * kPi * spec.rho / ((std::pow(2.0, q + 1.0) + 3.0) * Iq);

  // S(z) = sum_{j>=alpha} (C/2pi)^{j-1} j |a_j| z^{j-2}.
  tc.S_rho0 = 0.0;
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    const int j = spec.alpha + static_cast<int>(i);
    tc.S_rho0 += std::pow(tc.C / (2.0 * kPi), j - 1) * static_cast<Real>(j) *
                 std::abs(spec.coeffs[i]) * std::pow(tc.rho0, j - 2);
  }

  // C_n with s_n(L) replaced by its window upper bound 3 L^{p+1} / (2(p+1)).
  // The square on the first bracket matches the per-step constants so that
  // C_tilde dominates every C_n.
  const Real z_bar = std::pow(3.0 * std::pow(L, p + 1.0) / (2.0 * (p + 1.0)), 1.0 / d);
  auto picard_constant = [&](Real z) {
    const Real br = 1.0 + tc.K + tc.K1 * z;
    return br * br * (2.0 * tc.K + z) * (L - 1.0) * tc.S_rho0;
  };
  tc.C_tilde = picard_constant(z_bar);
  tc.M_tilde = (std::pow(L, q * (p + 1.0) / d) + tc.K_tilde) * tc.C_tilde;
  tc.sigma = std::min(1.0 / (2.0 * tc.C_tilde), tc.rho0 / (1.0 + tc.K + tc.K1 * z_bar));

  tc.epsilon_n.resize(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    const Real zn = std::pow(s_n(ts, n, L, L), 1.0 / d);
    tc.epsilon_n[n] = std::min(1.0 / (2.0 * picard_constant(zn)),
                               tc.rho0 / (1.0 + tc.K + tc.K1 * zn));
  }

  const Classification cls = classify(spec.alpha, p, d);
  tc.alpha_c = cls.alpha_c;
  tc.d_F = cls.d_F;

  // (1 - delta)(p+1) < alpha(p+1) - (p+1+d), i.e. delta > 1 + d_F/(p+1).
  const Real delta_min = 1.0 + cls.d_F / (p + 1.0);
  if (!(delta_min < 1.0))
    throw std::invalid_argument("theory_constants: no admissible delta (nonlinearity not irrelevant)");
  if (delta_opt) {
    if (!(*delta_opt > std::max(0.0, delta_min) && *delta_opt < 1.0))
      throw std::invalid_argument("theory_constants: delta violates the admissible interval");
    tc.delta = *delta_opt;
  } else {
    tc.delta = 0.5 * (std::max(0.0, delta_min) + 1.0);
  }

  tc.L1 = check_window(ts, L, n_max).smallest_L;
  tc.L_delta = std::max(tc.L1, std::pow(2.0 * tc.C * (1.0 + tc.C_dpq),
                                        d / (tc.delta * (p + 1.0))));

  const Real term_ratio = std::pow(L, -(p + 1.0) * (1.0 - tc.delta) / d);
  Real series = 0.0, term = 1.0;
  while (term >= 1e-12) {
    series += term;
    term *= term_ratio;
  }
  tc.D = 1.0 + tc.K_tilde * series;

  tc.epsilon_bar = std::min(tc.sigma / tc.D,
                            1.0 / (2.0 * tc.M_tilde * tc.D * tc.D *
                                   std::pow(L, (1.0 - tc.delta) * (p + 1.0) / d)));
  return tc;
}

std::vector<RGState> flow_states(const SpectralFunction& f0, const KernelSpec& k,
                                 const TimeScale& ts, const NonlinearitySpec& spec,
                                 const FlowOptions& opts,
                                 std::vector<RGStepReport>* step_reports,
                                 std::vector<std::string>* warnings,
                                 std::string* abort_reason) {
  if (opts.n_steps < 1) throw std::invalid_argument("run_flow: n_steps must be >= 1");
  const Classification cls = classify(spec.alpha, ts.p, k.d);
  if (cls.verdict != Verdict::irrelevant) {
    throw std::invalid_argument(std::string("run_flow: ") + to_string(cls.verdict) +
                                " nonlinearity, flow refused (irrelevant case only)");
  }
  const TheoryConstants tc = theory_constants(k, ts, spec, f0.grid, opts.L);

  PicardOptions popts;
  popts.tol = opts.picard_tol;
  popts.max_iter = opts.picard_max_iter;
  popts.substeps = opts.substeps;
  popts.small_data_override = opts.small_data_override;
  {
    const Real z_bar = std::pow(3.0 * std::pow(opts.L, ts.p + 1.0) / (2.0 * (ts.p + 1.0)), 1.0 / k.d);
    popts.norm_cap = tc.rho0 / (1.0 + tc.K + tc.K1 * z_bar);
  }

  const Real bq_f0 = bq_norm(f0);
  if (spec.lambda != 0.0 && !(bq_f0 < tc.epsilon_bar)) {
    if (!opts.small_data_override)
      throw NumericalError("run_flow: bq_norm(f0) exceeds the computed small-data bound epsilon_bar");
    if (warnings) {
      std::ostringstream msg;
      msg << "SMALL-DATA OVERRIDE: bq_norm(f0) = " << bq_f0 << " >= epsilon_bar = "
          << tc.epsilon_bar
          << "; theory constants are far from sharp, Picard contraction is monitored per step";
      warnings->push_back(msg.str());
    }
  }
  // Per-step guard uses sigma (the uniform-in-n admission bound).
  popts.sigma = std::min(tc.sigma, tc.epsilon_bar);

  std::vector<RGState> states;
  states.push_back(initial_state(f0, opts.L, k, ts, spec));
  for (int n = 0; n < opts.n_steps; ++n) {
    try {
      auto [next, step_report] = rg_step(states.back(), k, ts, spec, popts);
      if (step_reports) step_reports->push_back(step_report);
      states.push_back(std::move(next));
    } catch (const NumericalError& e) {
      if (abort_reason) *abort_reason = e.what();
      break;
    }
  }
  return states;
}

ConvergenceReport run_flow(const SpectralFunction& f0, const KernelSpec& k,
                           const TimeScale& ts, const NonlinearitySpec& spec,
                           const FlowOptions& opts) {
  ConvergenceReport report;
  std::string abort_reason;
  const std::vector<RGState> states =
      flow_states(f0, k, ts, spec, opts, &report.step_reports, &report.warnings, &abort_reason);
  const Classification cls = classify(spec.alpha, ts.p, k.d);

  const SpectralFunction profile0 = fpstar(k, ts.p, f0.grid);
  report.A_infinity = states.back().A_n;

  const Real rate_g = std::pow(opts.L, -(ts.p + 1.0) / k.d);
  const Real rate_A = std::pow(opts.L, cls.d_F / k.d);
  std::vector<Real> ns_g, gs, ns_a, das;
  for (std::size_t n = 0; n < states.size(); ++n) {
    FlowRow row;
    row.n = static_cast<int>(n);
    row.t = std::pow(opts.L, static_cast<Real>(n));
    row.A_n = states[n].A_n;
    row.bq_g_n = bq_norm(states[n].g_n);
    row.bq_f_n = bq_norm(states[n].f_n);
    row.err_to_Afpstar = bq_norm(states[n].f_n - report.A_infinity * profile0);
    row.theory_rate_g = rate_g;
    row.theory_rate_A = rate_A;
    report.rows.push_back(row);
    if (row.bq_g_n > 0.0) {
      ns_g.push_back(static_cast<Real>(n));
      gs.push_back(row.bq_g_n);
    }
  }
  for (std::size_t i = 0; i < report.step_reports.size(); ++i) {
    const Real da = std::abs(report.step_reports[i].nu_hat_zero);
    if (da > 0.0) {
      ns_a.push_back(static_cast<Real>(i));
      das.push_back(da);
    }
  }
  // Decay exponents: log values against n (slopes are per-step log factors).
  {
    std::vector<Real> lg(gs.size()), la(das.size());
    for (std::size_t i = 0; i < gs.size(); ++i) lg[i] = std::log(gs[i]);
    for (std::size_t i = 0; i < das.size(); ++i) la[i] = std::log(das[i]);
    report.g_decay = fit_line(ns_g, lg);
    report.dA_decay = fit_line(ns_a, la);
  }
  if (!report.step_reports.empty()) {
    const Real last = std::abs(report.step_reports.back().nu_hat_zero);
    report.A_tail_bound = rate_A < 1.0 ? last * rate_A / (1.0 - rate_A) : 0.0;
  }
  for (const auto& sr : report.step_reports)
    for (const auto& w : sr.warnings) report.warnings.push_back(w);
  if (!abort_reason.empty()) {
    report.aborted = true;
    report.abort_reason = abort_reason;
    report.warnings.push_back("flow aborted after " +
                              std::to_string(states.size() - 1) + " steps: " + abort_reason);
  }
  return report;
}

std::vector<SpectralFunction> mean_zero_family(const SpectralGrid& grid, int count,
                                               unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> coeff(-1.0, 1.0);
  std::uniform_real_distribution<Real> width(0.4, 1.2);
  std::vector<SpectralFunction> family;
  family.reserve(count);
  const Complex iu(0.0, 1.0);
  for (int c = 0; c < count; ++c) {
    Real a[4];
    for (auto& v : a) v = coeff(rng);
    const Real beta = width(rng);
    SpectralFunction g = zero_function(grid);
    for (Index j = 0; j < grid.n_points; ++j) {
      const Real w = grid.omega(j);
      const Real env = std::exp(-beta * w * w);
      Complex val(0.0, 0.0), der(0.0, 0.0);
      Complex iw_pow = iu * w;  // (i w)^m
      for (int m = 1; m <= 4; ++m) {
        val += a[m - 1] * iw_pow;
        // d/dw (i w)^m = m i (i w)^{m-1}
        Complex prev = (m == 1) ? Complex(1.0, 0.0) : std::pow(iu * w, m - 1);
        der += a[m - 1] * (static_cast<Real>(m) * iu * prev - 2.0 * beta * w * iw_pow);
        iw_pow *= iu * w;
      }
      g.hat[j] = val * env;
      g.hat_deriv[j] = der * env;
    }
    family.push_back(std::move(g));
  }
  return family;
}

ContractionStudy contraction_study(const SpectralGrid& grid, const KernelSpec& k,
                                   const TimeScale& ts, const std::vector<Real>& Ls,
                                   int family_size, unsigned long seed) {
  ContractionStudy study;
  study.Ls = Ls;
  study.C = contraction_constant(k, grid, ts.p);
  const auto family = mean_zero_family(grid, family_size, seed);

  std::vector<Real> worst_log_x, worst_log_y;
  study.all_below_bound = true;
  for (Real L : Ls) {
    std::vector<Real> ratios;
    Real worst = 0.0;
    for (const auto& g : family) {
      const Real before = bq_norm(g);
      const Real after = bq_norm(linear_rg_apply(g, 0, L, k, ts));
      ratios.push_back(after / before);
      worst = std::max(worst, after / before);
    }
    const Real bound = study.C * std::pow(L, -(ts.p + 1.0) / k.d);
    study.ratios.push_back(std::move(ratios));
    study.worst.push_back(worst);
    study.bound.push_back(bound);
    if (!(worst <= bound)) study.all_below_bound = false;
  }
  study.slope = fit_loglog(study.Ls, study.worst);
  return study;
}

}  // namespace rgflow
