// rgflow: numerical experiments for the block renormalization of integral
// equations with generalized heat kernels.  One config file = one
// reproducible run; every subcommand writes deterministic CSVs.

#include "rgflow/config.hpp"
#include "rgflow/csv.hpp"
#include "rgflow/oracle.hpp"
#include "rgflow/rg.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace rgflow;

namespace {

constexpr const char* kVersion = "rgflow 0.1.0";

struct Experiment {
  RunConfig cfg;
  SpectralGrid grid;
  KernelSpec kernel;
  TimeScale ts;
  NonlinearitySpec spec;
  fs::path dir;
};

Experiment load(const std::string& config_path) {
  Experiment e;
  e.cfg = parse_config_file(config_path);
  e.grid = grid_from(e.cfg);
  e.kernel = kernel_from(e.cfg);
  e.ts = timescale_from(e.cfg);
  e.spec = nonlinearity_from(e.cfg);
  if (const char* env = std::getenv("RGFLOW_OUTPUT_DIR"))
    e.dir = env;
  else
    e.dir = e.cfg.output_dir;
  fs::create_directories(e.dir);
  return e;
}

void write_manifest(const Experiment& e) {
  std::ofstream out(e.dir / "manifest.txt", std::ios::binary);
  out << "# " << kVersion << "\n" << print_config(e.cfg);
}

FlowOptions flow_options(const RunConfig& c) {
  FlowOptions o;
  o.L = c.L;
  o.n_steps = c.n_steps;
  o.picard_tol = c.picard_tol;
  o.picard_max_iter = c.picard_max_iter;
  o.substeps = c.substeps;
  o.small_data_override = c.small_data_override;
  return o;
}

/// Config-driven initial data:
/// amplitude * f_p^* + perturbation * (i w) exp(-w^2), the second term a
/// fixed smooth mean-zero bump.
SpectralFunction initial_data(const Experiment& e) {
  SpectralFunction f = e.cfg.amplitude * fpstar(e.kernel, e.ts.p, e.grid);
  if (e.cfg.perturbation != 0.0) {
    const Real a = e.cfg.perturbation;
    for (Index j = 0; j < e.grid.n_points; ++j) {
      const Real w = e.grid.omega(j);
      const Complex iw(0.0, w);
      f.hat[j] += a * iw * std::exp(-w * w);
      f.hat_deriv[j] += a * (Complex(0.0, 1.0) - 2.0 * w * iw) * std::exp(-w * w);
    }
  }
  return f;
}

int cmd_validate_kernel(const std::string& config_path) {
  const Experiment e = load(config_path);
  const Real tol = e.kernel.family == KernelFamily::gaussian ? 1e-10 : 1e-6;
  const auto report = validate_hypotheses(e.kernel, e.grid, {0.5, 1.0, 2.0, 4.0}, tol);

  std::printf("%-18s %-14s %-10s %s\n", "check", "residual", "tolerance", "pass");
  for (const auto& c : report.checks)
    std::printf("%-18s %-14.6g %-10.2g %s\n", c.id.c_str(), c.residual, c.tolerance,
                c.pass ? "yes" : "NO");
  if (std::isfinite(report.tail_exponent))
    std::printf("measured tail exponent of |G(x,1)|: %.4f\n", report.tail_exponent);
  write_manifest(e);
  write_hypothesis_csv(report, (e.dir / "hypothesis_report.csv").string());

  if (report.all_pass()) return 0;
  if (e.kernel.family == KernelFamily::stable) {
    // Heavy-tailed families genuinely violate the decay hypothesis; all
    // frequency-side identities used by the flow still hold.
    bool others_ok = true;
    for (const auto& c : report.checks)
      if (c.id != "G1_decay" && !c.pass) others_ok = false;
    if (others_ok) {
      std::printf("WARNING: decay hypothesis violated (expected for stable kernels); "
                  "RG flow remains available\n");
      return 0;
    }
  }
  return 1;
}

int cmd_linear_demo(const std::string& config_path) {
  const Experiment e = load(config_path);
  const SpectralFunction f0 = initial_data(e);
  const auto rows = linear_flow(f0, e.cfg.n_steps, e.cfg.L, e.kernel, e.ts);

  const NonlinearitySpec off = make_nonlinearity(0.0, e.spec.alpha, e.spec.coeffs, e.spec.rho);
  const Real T = std::pow(e.cfg.L, e.cfg.n_steps);
  const Trajectory traj = march(f0, T, e.cfg.steps_per_octave, e.kernel, e.ts, off);

  std::vector<Real> cross(rows.size(), 0.0);
  SpectralFunction f = f0;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    if (n > 0) f = linear_rg_apply(f, static_cast<int>(n) - 1, e.cfg.L, e.kernel, e.ts);
    const SpectralFunction v = rescaled_snapshot(traj, rows[n].t, e.kernel, e.ts.p);
    cross[n] = bq_norm(f - v);
  }
  write_manifest(e);
  write_linear_csv(rows, cross, (e.dir / "linear_convergence.csv").string());

  Real worst_ratio = 0.0;
  for (std::size_t n = 2; n + 1 < rows.size(); ++n)
    if (rows[n].bq_g > 0.0) worst_ratio = std::max(worst_ratio, rows[n + 1].bq_g / rows[n].bq_g);
  const Real bound = contraction_constant(e.kernel, e.grid, e.ts.p) *
                     std::pow(e.cfg.L, -(e.ts.p + 1.0) / e.kernel.d);
  const Real worst_cross = *std::max_element(cross.begin(), cross.end());

  std::printf("late-step contraction ratio: %.6g (constant bound %.6g)\n", worst_ratio, bound);
  std::printf("max |f_n - oracle| over n:   %.6g\n", worst_cross);
  const bool pass = worst_ratio < 1.0 && worst_ratio <= bound && worst_cross < 1e-8;
  std::printf("%s\n", pass ? "rate check: PASS" : "rate check: FAIL");
  return pass ? 0 : 1;
}

int cmd_rg_run(const std::string& config_path) {
  const Experiment e = load(config_path);
  const SpectralFunction f0 = initial_data(e);
  const ConvergenceReport report = run_flow(f0, e.kernel, e.ts, e.spec, flow_options(e.cfg));
  write_manifest(e);
  write_convergence_csv(report, (e.dir / "rg_convergence.csv").string());

  for (const auto& w : report.warnings) std::printf("WARNING: %s\n", w.c_str());
  std::printf("A_infinity = %.12g (tail bound %.3g)\n", report.A_infinity, report.A_tail_bound);
  std::printf("fitted per-step g factor: %.6g (R^2 %.4f); lambda factor target %.6g\n",
              std::exp(report.g_decay.slope), report.g_decay.r2,
              report.rows.empty() ? 0.0 : report.rows.front().theory_rate_g);
  std::printf("fitted per-step |dA| factor: %.6g (R^2 %.4f); target %.6g\n",
              std::exp(report.dA_decay.slope), report.dA_decay.r2,
              report.rows.empty() ? 0.0 : report.rows.front().theory_rate_A);
  if (report.aborted) {
    std::fprintf(stderr, "numerical failure: %s\n", report.abort_reason.c_str());
    return 3;
  }
  return 0;
}

int cmd_oracle_run(const std::string& config_path) {
  const Experiment e = load(config_path);
  const SpectralFunction f0 = initial_data(e);
  const Trajectory traj = march(f0, e.cfg.T, e.cfg.steps_per_octave, e.kernel, e.ts, e.spec);
  write_manifest(e);

  // Snapshot export at octave times, with a manifest line up front.
  {
    std::ofstream out(e.dir / "trajectory.csv", std::ios::binary);
    out << "# " << kVersion << " omega_max=" << csv_real(e.grid.omega_max)
        << " n_points=" << e.grid.n_points << " q=" << e.grid.q
        << " T=" << csv_real(e.cfg.T) << " steps_per_octave=" << e.cfg.steps_per_octave << "\n";
    out << "t,omega,re_hat,im_hat\n";
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
      const Real t = traj.times[m];
      const Real oct = std::log2(t);
      if (m != 0 && m + 1 != traj.times.size() && std::abs(oct - std::round(oct)) > 1e-12)
        continue;
      for (Index j = 0; j < e.grid.n_points; ++j)
        out << csv_real(t) << ',' << csv_real(e.grid.omega(j)) << ','
            << csv_real(traj.snaps[m].hat[j].real()) << ','
            << csv_real(traj.snaps[m].hat[j].imag()) << "\n";
    }
  }

  // Rescaled-error ladder; A estimated by the conserved mass at the final
  // snapshot (exact for lambda = 0).
  const Real A = traj.snaps.back().hat[e.grid.zero_index()].real();
  std::vector<std::vector<std::string>> rows;
  std::vector<Real> ts_fit, err_fit;
  for (Real t = e.cfg.L; t <= e.cfg.T * (1.0 + 1e-12); t *= e.cfg.L) {
    const RescaledError err = rescaled_error(traj, t, A, e.kernel, e.ts.p);
    const Real drift = std::pow(std::abs(r(e.ts, err.snapshot_time)) /
                                    std::pow(err.snapshot_time, e.ts.p + 1.0),
                                1.0 / e.kernel.d);
    rows.push_back({csv_real(err.snapshot_time), csv_real(err.value), csv_real(drift)});
    if (err.value > 0.0) {
      ts_fit.push_back(err.snapshot_time);
      err_fit.push_back(err.value);
    }
  }
  write_csv((e.dir / "rescaled_error.csv").string(), {"t", "rescaled_error", "drift_rate"}, rows);
  const LineFit fit = fit_loglog(ts_fit, err_fit);
  std::printf("rescaled error: %zu octave points, fitted slope %.4f (R^2 %.4f)\n",
              ts_fit.size(), fit.slope, fit.r2);
  return 0;
}

int cmd_compare(const std::string& config_path) {
  const Experiment e = load(config_path);
  const SpectralFunction f0 = initial_data(e);

  const int n_compare = std::min(
      e.cfg.n_steps,
      static_cast<int>(std::floor(std::log(e.cfg.T) / std::log(e.cfg.L) + 1e-9)));
  FlowOptions fopts = flow_options(e.cfg);
  fopts.n_steps = std::max(1, n_compare);
  const std::vector<RGState> states = flow_states(f0, e.kernel, e.ts, e.spec, fopts);

  const Trajectory traj = march(f0, e.cfg.T, e.cfg.steps_per_octave, e.kernel, e.ts, e.spec);

  std::vector<std::vector<std::string>> rows;
  Real worst = 0.0;
  for (std::size_t n = 0; n < states.size(); ++n) {
    const Real t = std::pow(e.cfg.L, static_cast<Real>(n));
    const SpectralFunction v = rescaled_snapshot(traj, t, e.kernel, e.ts.p);
    const Real disc = bq_norm(states[n].f_n - v);
    worst = std::max(worst, disc);
    rows.push_back({std::to_string(n), csv_real(t), csv_real(disc),
                    csv_real(bq_norm(states[n].f_n)), csv_real(bq_norm(v))});
  }
  write_manifest(e);
  write_csv((e.dir / "compare.csv").string(),
            {"n", "t", "bq_discrepancy", "bq_f_rg", "bq_f_oracle"}, rows);
  std::printf("max RG-oracle discrepancy over n <= %zu: %.6g\n", states.size() - 1, worst);
  return 0;
}

int cmd_contraction_study(const std::string& config_path) {
  const Experiment e = load(config_path);
  const ContractionStudy study =
      contraction_study(e.grid, e.kernel, e.ts, {2.0, 4.0, 8.0}, 20, e.cfg.seed);
  write_manifest(e);
  write_contraction_csv(study, (e.dir / "contraction.csv").string());

  for (std::size_t li = 0; li < study.Ls.size(); ++li)
    std::printf("L = %g: worst ratio %.6g, bound %.6g\n", study.Ls[li], study.worst[li],
                study.bound[li]);
  const Real target = -(e.ts.p + 1.0) / e.kernel.d;
  std::printf("fitted slope %.4f (target %.4f), C = %.6g\n", study.slope.slope, target, study.C);
  const bool pass = study.all_below_bound &&
                    std::abs(study.slope.slope - target) <= 0.15 * std::abs(target);
  std::printf("%s\n", pass ? "contraction check: PASS" : "contraction check: FAIL");
  return pass ? 0 : 1;
}

int cmd_constants(const std::string& config_path) {
  const Experiment e = load(config_path);
  const TheoryConstants tc =
      theory_constants(e.kernel, e.ts, e.spec, e.grid, e.cfg.L);
  const auto row = [](const char* name, Real v) { std::printf("%-12s %.10g\n", name, v); };
  row("K", tc.K);
  row("K1", tc.K1);
  row("C_dpq", tc.C_dpq);
  row("K_tilde", tc.K_tilde);
  row("M", tc.M);
  row("A_factor", tc.A_factor);
  row("C", tc.C);
  row("rho0", tc.rho0);
  row("S_rho0", tc.S_rho0);
  row("C_tilde", tc.C_tilde);
  row("M_tilde", tc.M_tilde);
  row("sigma", tc.sigma);
  row("epsilon_0", tc.epsilon_n.front());
  row("epsilon_20", tc.epsilon_n.back());
  row("epsilon_bar", tc.epsilon_bar);
  row("D", tc.D);
  row("L1", tc.L1);
  row("L_delta", tc.L_delta);
  row("alpha_c", tc.alpha_c);
  row("d_F", tc.d_F);
  row("delta", tc.delta);
  bool ordered = true;
  for (Real eps : tc.epsilon_n) ordered = ordered && tc.sigma <= eps;
  std::printf("sigma <= epsilon_n for n = 0..%zu: %s\n", tc.epsilon_n.size() - 1,
              ordered ? "yes" : "NO");
  return ordered ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RG flows for integral equations with generalized heat kernels"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  int (*handler)(const std::string&) = nullptr;
  const auto add = [&](const char* name, const char* desc, int (*fn)(const std::string&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", config_path, "experiment config file")->required();
    sub->callback([&handler, fn]() { handler = fn; });
  };
  add("validate-kernel", "check the kernel hypotheses numerically", cmd_validate_kernel);
  add("linear-demo", "linear flow vs the exact Fourier solution", cmd_linear_demo);
  add("rg-run", "full nonlinear RG flow", cmd_rg_run);
  add("oracle-run", "direct march and rescaled-error ladder", cmd_oracle_run);
  add("compare", "RG flow against the direct oracle, per step", cmd_compare);
  add("contraction-study", "measured linear contraction ratios over L", cmd_contraction_study);
  add("constants", "explicit constants of the contraction machinery", cmd_constants);

  try {
    app.parse(argc, argv);
    return handler(config_path);
  } catch (const CLI::ParseError& err) {
    return app.exit(err);
  } catch (const ConfigError& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return 2;
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "config error: %s\n", err.what());
    return 2;
  } catch (const NumericalError& err) {
    std::fprintf(stderr, "numerical failure: %s\n", err.what());
    return 3;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
}
