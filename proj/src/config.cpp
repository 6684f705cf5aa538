#include "rgflow/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rgflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

Real parse_real(const std::string& v, const std::string& src, int line) {
  std::size_t pos = 0;
  Real out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(src, line, "expected a real number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(src, line, "trailing characters in number '" + v + "'");
  return out;
}

long parse_int(const std::string& v, const std::string& src, int line) {
  std::size_t pos = 0;
  long out;
  try {
    out = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(src, line, "expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(src, line, "trailing characters in integer '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& src, int line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError(src, line, "expected true or false, got '" + v + "'");
}

std::vector<Real> parse_list(const std::string& v, const std::string& src, int line) {
  std::vector<Real> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_real(item, src, line));
  }
  if (out.empty()) throw ConfigError(src, line, "expected a comma-separated list of reals");
  return out;
}

std::string format_g17(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& src) {
  RunConfig c;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(src, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(src, line, "empty key");
    if (value.empty()) throw ConfigError(src, line, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(src, line, "duplicate key '" + key + "'");

    if (key == "kernel.family") {
      if (value != "gaussian" && value != "stable")
        throw ConfigError(src, line, "kernel.family must be gaussian or stable");
      c.kernel_family = value;
    } else if (key == "kernel.d") {
      c.kernel_d = parse_real(value, src, line);
    } else if (key == "kernel.q") {
      c.kernel_q = static_cast<int>(parse_int(value, src, line));
    } else if (key == "kernel.M") {
      c.kernel_M = static_cast<int>(parse_int(value, src, line));
    } else if (key == "timescale.p") {
      c.p = parse_real(value, src, line);
    } else if (key == "timescale.r_model") {
      if (value != "zero" && value != "power")
        throw ConfigError(src, line, "timescale.r_model must be zero or power");
      c.r_model = value;
    } else if (key == "timescale.b") {
      c.b = parse_real(value, src, line);
    } else if (key == "timescale.gamma") {
      c.gamma = parse_real(value, src, line);
    } else if (key == "nonlinearity.lambda") {
      c.lambda = parse_real(value, src, line);
    } else if (key == "nonlinearity.alpha") {
      c.alpha = static_cast<int>(parse_int(value, src, line));
    } else if (key == "nonlinearity.coeffs") {
      c.coeffs = parse_list(value, src, line);
    } else if (key == "nonlinearity.rho") {
      c.rho = parse_real(value, src, line);
    } else if (key == "initial.amplitude") {
      c.amplitude = parse_real(value, src, line);
    } else if (key == "initial.perturbation") {
      c.perturbation = parse_real(value, src, line);
    } else if (key == "grid.omega_max") {
      c.omega_max = parse_real(value, src, line);
    } else if (key == "grid.n_points") {
      c.n_points = parse_int(value, src, line);
    } else if (key == "rg.L") {
      c.L = parse_real(value, src, line);
    } else if (key == "rg.n_steps") {
      c.n_steps = static_cast<int>(parse_int(value, src, line));
    } else if (key == "rg.picard_tol") {
      c.picard_tol = parse_real(value, src, line);
    } else if (key == "rg.picard_max_iter") {
      c.picard_max_iter = static_cast<int>(parse_int(value, src, line));
    } else if (key == "rg.substeps") {
      c.substeps = static_cast<int>(parse_int(value, src, line));
    } else if (key == "rg.small_data_override") {
      c.small_data_override = parse_bool(value, src, line);
    } else if (key == "oracle.T") {
      c.T = parse_real(value, src, line);
    } else if (key == "oracle.steps_per_octave") {
      c.steps_per_octave = static_cast<int>(parse_int(value, src, line));
    } else if (key == "output.dir") {
      c.output_dir = value;
    } else if (key == "seed") {
      c.seed = static_cast<unsigned long>(parse_int(value, src, line));
    } else {
      throw ConfigError(src, line, "unknown key '" + key + "'");
    }
  }

  // Re-validate every cross-field constraint of the owning modules now, so a
  // bad config fails at load rather than mid-run.
  try {
    grid_from(c);
    kernel_from(c);
    timescale_from(c);
    nonlinearity_from(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(src, 0, e.what());
  }
  if (!(c.L > 1.0)) throw ConfigError(src, 0, "rg.L must be > 1");
  if (c.n_steps < 1) throw ConfigError(src, 0, "rg.n_steps must be >= 1");
  if (!(c.picard_tol > 0.0)) throw ConfigError(src, 0, "rg.picard_tol must be positive");
  if (c.picard_max_iter < 1) throw ConfigError(src, 0, "rg.picard_max_iter must be >= 1");
  if (c.substeps < 1) throw ConfigError(src, 0, "rg.substeps must be >= 1");
  if (!(c.T > 1.0)) throw ConfigError(src, 0, "oracle.T must be > 1");
  if (c.steps_per_octave < 1) throw ConfigError(src, 0, "oracle.steps_per_octave must be >= 1");
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string print_config(const RunConfig& c) {
  std::ostringstream out;
  out << "kernel.family = " << c.kernel_family << "\n";
  out << "kernel.d = " << format_g17(c.kernel_d) << "\n";
  out << "kernel.q = " << c.kernel_q << "\n";
  out << "kernel.M = " << c.kernel_M << "\n";
  out << "timescale.p = " << format_g17(c.p) << "\n";
  out << "timescale.r_model = " << c.r_model << "\n";
  out << "timescale.b = " << format_g17(c.b) << "\n";
  out << "timescale.gamma = " << format_g17(c.gamma) << "\n";
  out << "nonlinearity.lambda = " << format_g17(c.lambda) << "\n";
  out << "nonlinearity.alpha = " << c.alpha << "\n";
  out << "nonlinearity.coeffs = ";
  for (std::size_t i = 0; i < c.coeffs.size(); ++i)
    out << (i ? ", " : "") << format_g17(c.coeffs[i]);
  out << "\n";
  out << "nonlinearity.rho = " << format_g17(c.rho) << "\n";
  out << "initial.amplitude = " << format_g17(c.amplitude) << "\n";
  out << "initial.perturbation = " << format_g17(c.perturbation) << "\n";
  out << "grid.omega_max = " << format_g17(c.omega_max) << "\n";
  out << "grid.n_points = " << c.n_points << "\n";
  out << "rg.L = " << format_g17(c.L) << "\n";
  out << "rg.n_steps = " << c.n_steps << "\n";
  out << "rg.picard_tol = " << format_g17(c.picard_tol) << "\n";
  out << "rg.picard_max_iter = " << c.picard_max_iter << "\n";
  out << "rg.substeps = " << c.substeps << "\n";
  out << "rg.small_data_override = " << (c.small_data_override ? "true" : "false") << "\n";
  out << "oracle.T = " << format_g17(c.T) << "\n";
  out << "oracle.steps_per_octave = " << c.steps_per_octave << "\n";
  out << "output.dir = " << c.output_dir << "\n";
  out << "seed = " << c.seed << "\n";
  return out.str();
}

SpectralGrid grid_from(const RunConfig& c) { return make_grid(c.omega_max, c.n_points, c.kernel_q); }

KernelSpec kernel_from(const RunConfig& c) {
  if (c.kernel_family == "gaussian") {
    if (c.kernel_d != 2.0)
      throw std::invalid_argument("kernel: gaussian family requires d = 2");
    return gaussian_kernel(c.kernel_q, c.kernel_M);
  }
  return stable_kernel(c.kernel_d, c.kernel_q, c.kernel_M);
}

TimeScale timescale_from(const RunConfig& c) {
  if (c.r_model == "zero") return zero_timescale(c.p);
  TimeScale ts = power_timescale(c.p, c.b, c.gamma);
  if (1.0 + c.b <= 0.0)
    throw std::invalid_argument("timescale: c(t) = t^p + b t^{p-gamma} must stay positive (b > -1)");
  return ts;
}

NonlinearitySpec nonlinearity_from(const RunConfig& c) {
  return make_nonlinearity(c.lambda, c.alpha, c.coeffs, c.rho);
}

}  // namespace rgflow
