#pragma once

// One config file = one reproducible experiment.  Plain text, one dotted
// key per line:  "kernel.family = gaussian".  '#' starts a comment.
// Unknown and duplicate keys are rejected with the offending line number.

#include "rgflow/kernel.hpp"
#include "rgflow/nonlinearity.hpp"
#include "rgflow/spectral.hpp"
#include "rgflow/timescale.hpp"

#include <string>
#include <vector>

namespace rgflow {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RunConfig {
  std::string kernel_family = "gaussian";
  Real kernel_d = 2.0;
  int kernel_q = 2;
  int kernel_M = 2;

  Real p = 1.0;
  std::string r_model = "zero";
  Real b = 0.0;
  Real gamma = 1.0;

  Real lambda = 0.0;
  int alpha = 3;
  std::vector<Real> coeffs = {1.0};
  Real rho = 1.0;

  Real omega_max = 16.0;
  Index n_points = 2048;

  // initial data: amplitude * f_p^* + perturbation * (i w) exp(-w^2) bump
  Real amplitude = 1.0;
  Real perturbation = 0.0;

  Real L = 2.0;
  int n_steps = 10;
  Real picard_tol = 1e-12;
  int picard_max_iter = 50;
  int substeps = 64;
  bool small_data_override = false;

  Real T = 64.0;
  int steps_per_octave = 32;

  std::string output_dir = "out";
  unsigned long seed = 1;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config_text(const std::string& text, const std::string& source_name);
RunConfig parse_config_file(const std::string& path);

/// Canonical rendering; parse_config_text(print_config(c)) == c.
std::string print_config(const RunConfig& c);

// Builders with cross-field validation (errors surface as
// std::invalid_argument; parse_* re-checks them at load time).
SpectralGrid grid_from(const RunConfig& c);
KernelSpec kernel_from(const RunConfig& c);
TimeScale timescale_from(const RunConfig& c);
NonlinearitySpec nonlinearity_from(const RunConfig& c);

}  // namespace rgflow
