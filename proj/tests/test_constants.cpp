#include "rgflow/rg.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>

using namespace rgflow;

namespace {
NonlinearitySpec cubic() { return make_nonlinearity(1.0, 3, {1.0}, 1.0); }
}

TEST_SUITE("constants") {

TEST_CASE("gaussian K and the alpha_c table") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  const TheoryConstants tc = theory_constants(gaussian_kernel(), zero_timescale(1.0),
                                              cubic(), g, 2.0);
  CHECK(tc.K == 1.0);
  CHECK(tc.K1 < 1.0);
  CHECK(tc.alpha_c == 2.0);
  CHECK(tc.d_F == -2.0);

  CHECK(classify(3, 0.5, 2.0).alpha_c == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  CHECK(classify(3, 2.0, 1.5).alpha_c == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("C_dpq matches a dense scan") {
  // sup needs a dense grid: the weight's curvature at its max is O(1).
  const SpectralGrid g = make_grid(16.0, Index(1) << 20, 2);
  const TheoryConstants tc = theory_constants(gaussian_kernel(), zero_timescale(1.0),
                                              cubic(), g, 2.0);
  const Real expected =
      2.0 * oracles::dense_sup(
                [](Real w) {
                  return (1.0 + w * w) *
                         (std::exp(-w * w) + 2.0 * std::abs(w) * std::exp(-w * w));
                },
                16.0);
  CHECK(std::abs(tc.C_dpq - expected) < 1e-6);
}

TEST_CASE("sigma is a uniform lower bound for epsilon_n") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  for (const TimeScale& ts : {zero_timescale(1.0), power_timescale(1.0, 1.0, 1.0)}) {
    const TheoryConstants tc = theory_constants(gaussian_kernel(), ts, cubic(), g, 2.0);
    REQUIRE(tc.epsilon_n.size() == 21);
    for (Real eps : tc.epsilon_n) CHECK(tc.sigma <= eps);
    CHECK(tc.sigma > 0.0);
    CHECK(tc.epsilon_bar > 0.0);
    CHECK(tc.epsilon_bar <= tc.sigma);
  }
}

TEST_CASE("delta handling") {
  const SpectralGrid g = make_grid(16.0, 1024, 2);
  const KernelSpec k = gaussian_kernel();
  const TimeScale ts = zero_timescale(1.0);
  // alpha = 3, p = 1, d = 2: admissible interval is all of (0, 1); midpoint.
  const TheoryConstants tc = theory_constants(k, ts, cubic(), g, 2.0);
  CHECK(tc.delta == 0.5);
  CHECK_NOTHROW(theory_constants(k, ts, cubic(), g, 2.0, 0.9));
  CHECK_THROWS_AS(theory_constants(k, ts, cubic(), g, 2.0, 1.2), std::invalid_argument);
  // alpha = 4, p = 1, d = 2: delta > 1 + d_F/(p+1) = -1, so anything in (0,1).
  CHECK_NOTHROW(theory_constants(k, ts, make_nonlinearity(1.0, 4, {1.0}, 1.0), g, 2.0, 0.1));
  // marginal case has no admissible delta
  CHECK_THROWS_AS(theory_constants(k, ts, make_nonlinearity(1.0, 2, {1.0}, 1.0), g, 2.0),
                  std::invalid_argument);
}

TEST_CASE("D sums its geometric series") {
  const SpectralGrid g = make_grid(16.0, 1024, 2);
  const TheoryConstants tc = theory_constants(gaussian_kernel(), zero_timescale(1.0),
                                              cubic(), g, 2.0);
  const Real ratio = std::pow(2.0, -(1.0 + 1.0) * (1.0 - tc.delta) / 2.0);
  CHECK(tc.D == doctest::Approx(1.0 + tc.K_tilde / (1.0 - ratio)).epsilon(1e-9));
}

TEST_CASE("window threshold feeds L1 and L_delta") {
  const SpectralGrid g = make_grid(16.0, 1024, 2);
  const TimeScale ts = zero_timescale(1.0);
  const TheoryConstants tc = theory_constants(gaussian_kernel(), ts, cubic(), g, 2.0);
  CHECK(tc.L1 == doctest::Approx(std::sqrt(1.2)).epsilon(1e-3));
  CHECK(tc.L_delta >= tc.L1);
  // C_tilde dominates every per-step constant, so sigma <= epsilon_n held above;
  // the M_tilde chain stays ordered too.
  CHECK(tc.M_tilde >= tc.C_tilde);
}

}  // TEST_SUITE
