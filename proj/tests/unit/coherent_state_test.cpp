#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rotorwp/coherent_state.hpp"
#include "rotorwp/wavepacket.hpp"
#include "support/reference_legendre.hpp"

using namespace rotorwp;
using std::numbers::pi;

namespace {

// Circular-state weights |b_{I,I}|^2 = (2N)^{2I+1} / ((2I+1)! sinh 2N),
// from projecting the exponential's power series term by term.
double circular_weight(double n, int i) {
  using testing::BigFloat;
  const BigFloat x = 2 * BigFloat(n);
  const BigFloat w = boost::multiprecision::pow(x, 2 * i + 1) /
                     (testing::factorial(2 * i + 1) * boost::multiprecision::sinh(x));
  return static_cast<double>(w);
}

// Linear-state coefficients b_{I0} = 2 i_I(N) sqrt(N (2I+1) / (2 sinh 2N)) in
// the symmetry-adapted orientation.
double linear_coefficient(double n, int i) {
  using testing::BigFloat;
  const BigFloat bessel = testing::modified_spherical_bessel(i, BigFloat(n));
  const BigFloat value =
      2 * bessel * boost::multiprecision::sqrt(
                       BigFloat(n) * (2 * i + 1) /
                       (2 * boost::multiprecision::sinh(2 * BigFloat(n))));
  return static_cast<double>(value);
}

double sum_norm_quadrature(const CoherentStateParams& params, int resolution) {
  const auto grid = QuadratureGrid::build(resolution, 2 * resolution + 1);
  double sum = 0.0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    for (int k = 0; k < grid.n_phi(); ++k) {
      const double w = grid.theta_weight()[j] * grid.phi_weight();
      sum += w * std::norm(evaluate_cs(params, grid.theta()[j], grid.phi(k)));
    }
  }
  return sum;
}

}  // namespace

TEST_SUITE("coherent_state") {

TEST_CASE("evaluate_cs closed form at the pole and eta-independent density") {
  // at theta = 0 the exponent vanishes and only the prefactor survives
  const double expected = std::sqrt(1.0 / (2.0 * pi * std::sinh(2.0)));
  for (double phi : {0.0, 1.0, 4.0}) {
    const auto v = evaluate_cs({1.0, 0.0}, 0.0, phi);
    CHECK(v.real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-15);
  }

  for (double theta : {0.4, 1.3, 2.2}) {
    for (double phi : {0.3, 2.0, 5.1}) {
      const double d0 = std::norm(evaluate_cs({6.0, 0.0}, theta, phi));
      const double d1 = std::norm(evaluate_cs({6.0, 0.7}, theta, phi));
      const double d2 = std::norm(evaluate_cs({6.0, 1.0}, theta, phi));
      CHECK(d0 == doctest::Approx(d1).epsilon(1e-13));
      CHECK(d0 == doctest::Approx(d2).epsilon(1e-13));
    }
  }
}

TEST_CASE("closed form is quadrature-normalized for the N x eta matrix") {
  for (double n : {1.0, 5.0, 20.0}) {
    for (double eta : {0.0, 0.3, 1.0}) {
      const int resolution = static_cast<int>(3 * n) + 40;
      CHECK(sum_norm_quadrature({n, eta}, resolution) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // analytic cross-check: int e^{2N sin(theta) cos(phi)} dOmega = 4 pi sinh(2N)/(2N)
  const double n = 5.0;
  const auto grid = QuadratureGrid::build(60, 121);
  double integral = 0.0;
  for (int j = 0; j < grid.n_theta(); ++j) {
    for (int k = 0; k < grid.n_phi(); ++k) {
      integral += grid.theta_weight()[j] * grid.phi_weight() *
                  std::exp(2.0 * n * std::sin(grid.theta()[j]) * std::cos(grid.phi(k)));
    }
  }
  CHECK(integral == doctest::Approx(4.0 * pi * std::sinh(2.0 * n) / (2.0 * n)).epsilon(1e-11));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(evaluate_cs({-1.0, 0.0}, 0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(evaluate_cs({0.0, 0.0}, 0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(evaluate_cs({2.0, 1.2}, 0.1, 0.1), ValidationError);
  CHECK_THROWS_AS(expand_cs({2.0, -1.0001}, 10, 1e-6), ValidationError);
}

TEST_CASE("circular expansion carries only M = I and matches the weight oracle") {
  const auto wp = expand_cs({20.0, 1.0}, 48, 1e-9);
  double off = 0.0;
  for (int i = 0; i <= wp.l_max(); ++i) {
    for (int m = -i; m < i; ++m) off += std::norm(wp.coefficient(i, m));
  }
  CHECK(off < 1e-10);
  for (int i : {10, 16, 20, 25, 32}) {
    CHECK(std::norm(wp.coefficient(i, i)) ==
          doctest::Approx(circular_weight(20.0, i)).epsilon(1e-10));
    // projection phase convention: real coefficients with sign (-1)^I
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK(wp.coefficient(i, i).real() * sign > 0.0);
    CHECK(std::abs(wp.coefficient(i, i).imag()) < 1e-12);
  }
}

TEST_CASE("linear expansion carries only M = 0 and matches the Bessel oracle") {
  const auto wp = expand_cs({20.0, 0.0}, 55, 1e-9);
  double off = 0.0;
  for (int i = 0; i <= wp.l_max(); ++i) {
    for (int m = -i; m <= i; ++m) {
      if (m != 0) off += std::norm(wp.coefficient(i, m));
    }
  }
  CHECK(off < 1e-10);
  for (int i : {0, 5, 13, 20, 28, 41}) {
    CHECK(wp.coefficient(i, 0).real() ==
          doctest::Approx(linear_coefficient(20.0, i)).epsilon(1e-9));
    CHECK(std::abs(wp.coefficient(i, 0).imag()) < 1e-12);
  }
}

TEST_CASE("elliptic expansion equals a doubled-resolution projection") {
  const CoherentStateParams params{20.0, 0.3};
  const int l_max = 52;
  const auto wp = expand_cs(params, l_max, 1e-8);

  const auto fine = QuadratureGrid::build(2 * (l_max + 60), 4 * (l_max + 60) + 1);
  const auto oracle = project(
      [&](double theta, double phi) { return canonical_cs_amplitude(params, theta, phi); },
      l_max, fine);
  for (int i = 0; i <= l_max; ++i) {
    for (int m = -i; m <= i; ++m) {
      CHECK(std::abs(wp.coefficient(i, m) - oracle.at(i, m)) < 1e-9);
    }
  }
}

TEST_CASE("expansion reconstructs the canonical amplitude on a 50 x 50 grid") {
  // tol bounds the truncated L2 mass, so the pointwise error scales as its
  // square root; the factor matches the coefficient-table invariant.
  for (double eta : {0.0, 0.3, 1.0}) {
    const double tol = 1e-9;
    const CoherentStateParams params{12.0, eta};
    const auto wp = expand_cs(params, suggest_lmax(params, tol), tol);
    double worst = 0.0;
    for (int a = 0; a < 50; ++a) {
      for (int b = 0; b < 50; ++b) {
        const double theta = pi * (a + 0.5) / 50;
        const double phi = 2.0 * pi * b / 50;
        worst = std::max(worst, std::abs(synthesize(wp.coeffs, theta, phi) -
                                         canonical_cs_amplitude(params, theta, phi)));
      }
    }
    CHECK(worst < 10.0 * std::sqrt(tol));
  }
}

TEST_CASE("reflection symmetry |b_IM(eta)| = |b_I,-M(-eta)|") {
  const auto plus = expand_cs({8.0, 0.45}, 30, 1e-8);
  const auto minus = expand_cs({8.0, -0.45}, 30, 1e-8);
  for (int i = 0; i <= 30; ++i) {
    for (int m = -i; m <= i; ++m) {
      CHECK(std::abs(plus.coefficient(i, m)) ==
            doctest::Approx(std::abs(minus.coefficient(i, -m))).epsilon(1e-9));
    }
  }
}

TEST_CASE("circular weight distribution peaks near N") {
  const auto wp = expand_cs({20.0, 1.0}, 48, 1e-9);
  double mean = 0.0;
  for (int i = 0; i <= wp.l_max(); ++i) mean += i * std::norm(wp.coefficient(i, i));
  CHECK(std::abs(mean - 19.5) < 2.0);
}

TEST_CASE("norm defect bookkeeping and renormalization") {
  const auto wp = expand_cs({10.0, 0.5}, 40, 1e-8);
  CHECK(wp.norm_defect < 1e-8);
  CHECK(std::abs(1.0 - wp.norm_squared() - wp.norm_defect) < 1e-14);

  const auto loose = expand_cs({10.0, 0.5}, 13, 1e-1, /*renormalize=*/true);
  CHECK(loose.norm_defect > 1e-6);                      // defect recorded, not hidden
  CHECK(std::abs(1.0 - loose.norm_squared()) < 1e-13);  // but coefficients rescaled
}

TEST_CASE("expand_cs reports unreachable tolerance with the achieved defect") {
  try {
    expand_cs({20.0, 1.0}, 12, 1e-10);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.achieved_defect() > 1e-10);
    CHECK(e.achieved_defect() < 1.0);
  }
}

TEST_CASE("suggest_lmax finds the smallest passing order") {
  const CoherentStateParams params{20.0, 1.0};
  const int l = suggest_lmax(params, 1e-8);
  CHECK_NOTHROW(expand_cs(params, l, 1e-8));
  CHECK_THROWS_AS(expand_cs(params, l - 5, 1e-8), TruncationError);
  CHECK_THROWS_AS(expand_cs(params, l - 1, 1e-8), TruncationError);

  // monotone in tol
  CHECK(suggest_lmax(params, 1e-2) < suggest_lmax(params, 1e-10));
  // small states truncate early
  CHECK(suggest_lmax({0.5, 0.0}, 1e-6) <= 10);
  // unreachable tolerance trips the order cap
  CHECK_THROWS_AS(suggest_lmax({45.0, 0.4}, 1e-30), ResourceError);
}

TEST_CASE("wavepacket JSON round-trip preserves coefficients exactly") {
  const auto wp = expand_cs({7.0, 0.6}, 26, 1e-7);
  const auto restored = wavepacket_from_json(to_json_string(wp));
  CHECK(restored.l_max() == wp.l_max());
  CHECK(restored.tol == wp.tol);
  CHECK(restored.norm_defect == wp.norm_defect);
  for (int i = 0; i <= wp.l_max(); ++i) {
    for (int m = -i; m <= i; ++m) {
      CHECK(restored.coefficient(i, m) == wp.coefficient(i, m));
    }
  }
  CHECK_THROWS_AS(wavepacket_from_json("{\"bad\": true}"), ValidationError);
  CHECK_THROWS_AS(wavepacket_from_json("not json"), ValidationError);
}

}  // TEST_SUITE
