#include "rgflow/config.hpp"
#include "rgflow/csv.hpp"

#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace rgflow;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("round trip parse(print(config)) == config") {
  RunConfig c;
  c.kernel_family = "stable";
  c.kernel_d = 1.5;
  c.kernel_M = 1;
  c.p = 0.75;
  c.r_model = "power";
  c.b = -0.25;
  c.gamma = 0.4;
  c.lambda = -0.5;
  c.alpha = 4;
  c.coeffs = {1.0, -0.125, 3.5e-3};
  c.rho = 2.0;
  c.amplitude = 0.02;
  c.perturbation = 0.1;
  c.omega_max = 24.0;
  c.n_points = 4096;
  c.L = 3.0;
  c.n_steps = 7;
  c.picard_tol = 2.5e-11;
  c.substeps = 32;
  c.small_data_override = true;
  c.T = 128.0;
  c.steps_per_octave = 16;
  c.output_dir = "elsewhere";
  c.seed = 99;
  CHECK(parse_config_text(print_config(c), "roundtrip") == c);
}

TEST_CASE("rejections carry the offending line") {
  const auto expect_line = [](const std::string& text, int line) {
    try {
      parse_config_text(text, "t");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("kernel.family = gaussian\nnot.a.key = 1\n", 2);
  expect_line("rg.L = 2\nrg.L = 4\n", 2);
  expect_line("rg.L == 2\n", 1);  // value '= 2' fails to parse as a real
  expect_line("timescale.p =\n", 1);
  expect_line("grid.n_points = twelve\n", 1);
}

TEST_CASE("cross-field constraints re-validated at load") {
  CHECK_THROWS_AS(parse_config_text("kernel.family = gaussian\nkernel.d = 3.0\n", "t"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("kernel.family = stable\nkernel.d = 2.5\n", "t"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("grid.n_points = 100\n", "t"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("nonlinearity.lambda = 1.5\n", "t"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("timescale.p = -1\n", "t"), ConfigError);
  CHECK_NOTHROW(parse_config_text("kernel.family = stable\nkernel.d = 1.5\nkernel.M = 1\n", "t"));
}

TEST_CASE("csv shape and determinism") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "rgflow_csv_test";
  fs::create_directories(dir);

  const std::string empty_path = (dir / "empty.csv").string();
  write_csv(empty_path, {"a", "b"}, {});
  CHECK(slurp(empty_path) == "a,b\n");

  const std::string three_path = (dir / "three.csv").string();
  write_csv(three_path, {"a", "b"}, {{"1", "2"}, {"3", "4"}, {"5", "6"}});
  const std::string three = slurp(three_path);
  CHECK(std::count(three.begin(), three.end(), '\n') == 4);

  // identical content -> identical bytes
  const std::string again_path = (dir / "three_again.csv").string();
  write_csv(again_path, {"a", "b"}, {{"1", "2"}, {"3", "4"}, {"5", "6"}});
  CHECK(slurp(three_path) == slurp(again_path));

  CHECK(csv_real(0.1) == "0.10000000000000001");
  CHECK(csv_real(1.0) == "1");
}

}  // TEST_SUITE
