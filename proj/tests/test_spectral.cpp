#include "rgflow/spectral.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace rgflow;

namespace {

constexpr Real kPi = std::numbers::pi;

SpectralFunction analytic(const SpectralGrid& g, const std::function<Complex(Real)>& hat,
                          const std::function<Complex(Real)>& deriv) {
  SpectralFunction f = zero_function(g);
  for (Index k = 0; k < g.n_points; ++k) {
    f.hat[k] = hat(g.omega(k));
    f.hat_deriv[k] = deriv(g.omega(k));
  }
  return f;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("grid construction") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  CHECK(g.delta_omega() == 0.015625);
  CHECK(g.omega(1024) == 0.0);
  CHECK(g.zero_index() == 1024);
  CHECK(g.x_extent() == doctest::Approx(kPi * 2048 / 16.0));

  const SpectralGrid small = make_grid(8.0, 16, 2);
  CHECK(small.omega(0) == -8.0);
  CHECK(small.omega(15) == 7.0);

  CHECK_THROWS_AS(make_grid(16.0, 100, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(16.0, 2048, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(-1.0, 2048, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(16.0, 8, 2), std::invalid_argument);
}

TEST_CASE("from_physical reproduces the gaussian transform") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  ArrayXr v(g.n_points);
  for (Index m = 0; m < g.n_points; ++m) {
    const Real x = g.x(m);
    v[m] = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);  // heat kernel at t = 1/2
  }
  const SpectralFunction f = from_physical(v, g);
  CHECK(std::abs(f.hat[g.zero_index()] - Complex(1.0, 0.0)) < 1e-10);
  Real worst = 0.0, worst_d = 0.0;
  for (Index k = 0; k < g.n_points; ++k) {
    const Real w = g.omega(k);
    worst = std::max(worst, std::abs(f.hat[k] - std::exp(-0.5 * w * w)));
    worst_d = std::max(worst_d, std::abs(f.hat_deriv[k] - (-w * std::exp(-0.5 * w * w))));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_d < 1e-10);
}

TEST_CASE("from_physical trivia: zeros and odd functions") {
  const SpectralGrid g = make_grid(16.0, 256, 2);
  const SpectralFunction z = from_physical(ArrayXr::Zero(g.n_points), g);
  CHECK(z.hat.abs().maxCoeff() == 0.0);
  CHECK(z.hat_deriv.abs().maxCoeff() == 0.0);

  ArrayXr odd(g.n_points);
  for (Index m = 0; m < g.n_points; ++m) {
    const Real x = g.x(m);
    odd[m] = x * std::exp(-x * x);
  }
  CHECK(std::abs(from_physical(odd, g).hat[g.zero_index()]) < 1e-14);
}

TEST_CASE("transform contract against a closed form with drift") {
  // v(x) = (1 + x) e^{-x^2}; v_hat = sqrt(pi) e^{-w^2/4} (1 - i w/2).
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  ArrayXr v(g.n_points);
  for (Index m = 0; m < g.n_points; ++m) {
    const Real x = g.x(m);
    v[m] = (1.0 + x) * std::exp(-x * x);
  }
  const SpectralFunction f = from_physical(v, g);
  const Real rt_pi = std::sqrt(kPi);
  Real worst = 0.0, worst_d = 0.0;
  for (Index k = 0; k < g.n_points; ++k) {
    const Real w = g.omega(k);
    const Complex expect = rt_pi * std::exp(-0.25 * w * w) * Complex(1.0, -0.5 * w);
    const Complex expect_d = rt_pi * std::exp(-0.25 * w * w) *
                             (Complex(-0.5 * w, 0.25 * w * w) + Complex(0.0, -0.5));
    worst = std::max(worst, std::abs(f.hat[k] - expect));
    worst_d = std::max(worst_d, std::abs(f.hat_deriv[k] - expect_d));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_d < 1e-11);
}

TEST_CASE("roundtrip to_physical(from_physical(v)) == v") {
  const SpectralGrid g = make_grid(16.0, 512, 2);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    const Real a = u(rng), b = u(rng), c = 0.4 + 0.4 * std::abs(u(rng));
    ArrayXr v(g.n_points);
    for (Index m = 0; m < g.n_points; ++m) {
      const Real x = g.x(m);
      v[m] = (a + b * x) * std::exp(-c * x * x);
    }
    const ArrayXr back = to_physical(from_physical(v, g));
    const Real scale = v.abs().maxCoeff();
    CHECK((back - v).abs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("bq_norm basics") {
  const SpectralGrid g = make_grid(16.0, 256, 2);
  CHECK(bq_norm(zero_function(g)) == 0.0);

  const auto f = analytic(
      g, [](Real w) { return Complex(std::exp(-0.5 * w * w), 0.0); },
      [](Real w) { return Complex(-w * std::exp(-0.5 * w * w), 0.0); });
  const Real n1 = bq_norm(f);
  const Real n3 = bq_norm(3.0 * f);
  CHECK(std::abs(n3 - 3.0 * n1) <= 1e-12 * n3);

  const auto h = analytic(
      g, [](Real w) { return Complex(std::exp(-w * w), std::sin(w)); },
      [](Real w) { return Complex(0.1 * w, std::cos(w)); });
  CHECK(bq_norm(f + h) <= bq_norm(f) + bq_norm(h) + 1e-12);
}

TEST_CASE("bq_norm matches a dense-scan sup of the profile weight") {
  // Grid max vs true sup needs a dense grid; the weight
  // (1+w^2)(1+|w|)e^{-w^2/2} has curvature O(1) at its max.
  const SpectralGrid g = make_grid(16.0, Index(1) << 20, 2);
  const auto f = analytic(
      g, [](Real w) { return Complex(std::exp(-0.5 * w * w), 0.0); },
      [](Real w) { return Complex(-w * std::exp(-0.5 * w * w), 0.0); });
  const Real expected = oracles::dense_sup(
      [](Real w) { return (1.0 + w * w) * (1.0 + std::abs(w)) * std::exp(-0.5 * w * w); }, 16.0);
  CHECK(std::abs(bq_norm(f) - expected) < 1e-6);
}

TEST_CASE("bq_norm flags boundary-dominated maxima") {
  const SpectralGrid g = make_grid(16.0, 256, 2);
  const auto edge = analytic(
      g, [](Real w) { return Complex(std::exp(-0.1 * (w - 15.5) * (w - 15.5)), 0.0); },
      [](Real) { return Complex(0.0, 0.0); });
  CHECK(bq_norm_info(edge).boundary_dominated);

  const auto centered = analytic(
      g, [](Real w) { return Complex(std::exp(-0.5 * w * w), 0.0); },
      [](Real w) { return Complex(-w * std::exp(-0.5 * w * w), 0.0); });
  CHECK_FALSE(bq_norm_info(centered).boundary_dominated);
}

TEST_CASE("hat_at_zero") {
  const SpectralGrid g = make_grid(16.0, 256, 2);
  const auto f = analytic(
      g, [](Real w) { return Complex(std::exp(-0.5 * w * w), 0.0); },
      [](Real w) { return Complex(-w * std::exp(-0.5 * w * w), 0.0); });
  CHECK(hat_at_zero(f) == Complex(1.0, 0.0));
  CHECK(hat_at_zero(zero_function(g)) == Complex(0.0, 0.0));
  CHECK(hat_at_zero(2.0 * f) == Complex(2.0, 0.0));
}

TEST_CASE("pointwise_power squares against a direct convolution oracle") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  const auto f = analytic(
      g, [](Real w) { return Complex(std::exp(-w * w), 0.0); },
      [](Real w) { return Complex(-2.0 * w * std::exp(-w * w), 0.0); });
  const SpectralFunction sq = pointwise_power(f, 2);

  // (u^2)^hat = (u_hat * u_hat) / (2 pi) under this transform convention.
  for (Real w : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const Real expected = oracles::gaussian_self_convolution(w) / (2.0 * kPi);
    const Index k = g.zero_index() + static_cast<Index>(std::llround(w / g.delta_omega()));
    CHECK(std::abs(sq.hat[k].real() - expected) < 1e-6 * expected);
    CHECK(std::abs(sq.hat[k].imag()) < 1e-12);
  }
  // Same thing in closed form: e^{-w^2/2} / sqrt(8 pi).
  const Real closed = 1.0 / std::sqrt(8.0 * kPi);
  CHECK(sq.hat[g.zero_index()].real() == doctest::Approx(closed).epsilon(1e-9));

  CHECK(pointwise_power(zero_function(g), 3).hat.abs().maxCoeff() == 0.0);

  // Real even input stays real even (Hermitian with real spectrum).
  CHECK(hermitian_defect(sq) < 1e-12);
}

TEST_CASE("rescale identity, closed-form target, and composition") {
  const SpectralGrid g = make_grid(16.0, 2048, 2);
  const auto f = analytic(
      g, [](Real w) { return Complex(std::exp(-w * w), 0.0); },
      [](Real w) { return Complex(-2.0 * w * std::exp(-w * w), 0.0); });

  const SpectralFunction same = rescale(f, 1.0);
  CHECK((same.hat - f.hat).abs().maxCoeff() <= 1e-12);
  CHECK((same.hat_deriv - f.hat_deriv).abs().maxCoeff() <= 1e-12);

  const SpectralFunction half = rescale(f, 2.0);
  Real worst = 0.0, worst_d = 0.0;
  for (Index k = 0; k < g.n_points; ++k) {
    const Real w = g.omega(k);
    worst = std::max(worst, std::abs(half.hat[k] - std::exp(-0.25 * w * w)));
    worst_d = std::max(worst_d,
                       std::abs(half.hat_deriv[k] - (-0.5 * w * std::exp(-0.25 * w * w))));
  }
  CHECK(worst < 1e-8);
  CHECK(worst_d < 1e-8);

  CHECK(std::abs(half.hat[g.zero_index()] - f.hat[g.zero_index()]) < 1e-12);

  const SpectralFunction once = rescale(f, 6.0);
  const SpectralFunction twice = rescale(rescale(f, 2.0), 3.0);
  CHECK((once.hat - twice.hat).abs().maxCoeff() < 2e-8);

  CHECK_THROWS_AS(rescale(f, 0.5), std::invalid_argument);
}

TEST_CASE("hermitian symmetry is preserved by module operations") {
  const SpectralGrid g = make_grid(16.0, 512, 2);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<Real> u(-1.0, 1.0);
  const Real a = u(rng), b = u(rng), c = u(rng);
  ArrayXr v(g.n_points);
  for (Index m = 0; m < g.n_points; ++m) {
    const Real x = g.x(m);
    v[m] = (a + b * std::cos(0.7 * x) + c * x) * std::exp(-0.3 * x * x);
  }
  const SpectralFunction f = from_physical(v, g);
  const Real scale = f.hat.abs().maxCoeff();
  CHECK(hermitian_defect(f) < 1e-12 * scale);
  CHECK(hermitian_defect(pointwise_power(f, 2)) < 1e-12);
  CHECK(hermitian_defect(rescale(f, 1.5)) < 1e-10 * scale);
}

}  // TEST_SUITE
