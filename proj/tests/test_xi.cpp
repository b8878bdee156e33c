#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/xi.hpp"

using namespace pfz;

TEST_CASE("F series values") {
  const double pi = std::numbers::pi;
  const double first = (4.0 * pi * pi - 6.0 * pi) * std::exp(-pi);
  CHECK(first == doctest::Approx(0.89145).epsilon(1e-4));
  CHECK(F_eval(0.0) == doctest::Approx(0.893393800934).epsilon(1e-11));
  CHECK(F_eval_extended(ExtendedReal(0.0)).to_double() == doctest::Approx(F_eval(0.0)).epsilon(1e-15));
  CHECK_THROWS_AS(F_eval(-3.01), Error);
  CHECK(std::isfinite(F_eval(-3.0)));
  CHECK(F_noise_scale(-2.0) > 1e3 * std::abs(F_eval(2.0)));
}

TEST_CASE("F is even and positive") {
  const double f0 = F_eval(0.0);
  for (double u = 0.1; u <= 2.0 + 1e-9; u += 0.15) CHECK(std::abs(F_eval(u) - F_eval(-u)) <= 1e-10 * f0);
  CHECK(std::abs(F_eval(1.0) - F_eval(-1.0)) <= 1e-10);
  // On [-2, 3] F is never below minus its roundoff bound and is strictly
  // positive wherever it clears that bound.
  int resolved = 0;
  for (double u = -2.0; u <= 3.0 + 1e-9; u += 0.05) {
    const double f = F_eval_extended(ExtendedReal(u)).to_double();
    const double bound = 1e-30 * F_noise_scale(u);
    CHECK(f >= -bound);
    if (std::abs(f) > bound) {
      CHECK(f > 0.0);
      ++resolved;
    }
  }
  CHECK(resolved > 60);
  for (double u = -1.25; u <= 1.5 + 1e-9; u += 0.05) CHECK(F_eval(u) > 0.0);
}

TEST_CASE("zeta oracle") {
  CHECK(zeta_critical_line(0.0).real() == doctest::Approx(-1.4603545088095868).epsilon(1e-10));
  CHECK(zeta_eta(2.0).real() == doctest::Approx(std::numbers::pi * std::numbers::pi / 6.0).epsilon(1e-13));
  CHECK(std::abs(zeta_critical_line(14.134725)) < 1e-4);
  CHECK_THROWS_AS(zeta_critical_line(60.5), Error);
  CHECK_THROWS_AS(zeta_eta(1.0), Error);
  // zeta(1/2 + 50i) from an independent 30-digit evaluation.
  const std::complex<double> reference(-0.0817121083209799750, 0.330792194038661296);
  CHECK(std::abs(zeta_critical_line(50.0) - reference) <= 1e-8 * std::abs(reference));
}

TEST_CASE("xi values and normalization") {
  const ZValue v = xi_eval(0.0, 0.0);
  CHECK(v.value.real() == doctest::Approx(0.497120778188314).epsilon(1e-12));
  CHECK(xi_from_gamma_zeta(0.0) == doctest::Approx(0.497120778188314).epsilon(1e-10));
  // The measured constant: the integral of F e^{izu} is xi itself, half of
  // twice xi.
  for (double z : {0.0, 2.0, 5.0, 10.0}) CHECK(xi_normalization_ratio(z) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(xi_eval(14.134725, 0.0).value.real()) < 1e-6);
  for (double z : {3.0, 11.0}) CHECK(xi_eval(z, 0.0).value.real() == doctest::Approx(xi_eval(-z, 0.0).value.real()).epsilon(1e-12));
}

TEST_CASE("xi zeros agree with the zeta oracle") {
  const ZeroTable t = xi_zeros(30.0);
  REQUIRE(t.zeros.size() == 3);
  const double expected[] = {14.1347, 21.0220, 25.0109};
  for (int k = 0; k < 3; ++k) {
    CHECK(t.zeros[k].z == doctest::Approx(expected[k]).epsilon(1e-3 / expected[k]));
    CHECK(t.zeros[k].accepted);
    const double oracle = xi_oracle_zero(t.zeros[k].z - 0.01, t.zeros[k].z + 0.01);
    CHECK(std::abs(oracle - t.zeros[k].z) < 1e-6);
  }
  CHECK(xi_zeros(10.0).zeros.empty());
  CHECK_THROWS_AS(xi_zeros(60.0), Error);
  CHECK_THROWS_AS(xi_oracle_zero(1.0, 2.0), Error);
}

TEST_CASE("xi rectangle count") {
  const RectCount r = xi_count_rect({1.0, 30.0, 2.0});
  CHECK(r.count == 3);
  CHECK(r.distance_from_integer < 1e-6);
}

TEST_CASE("xi flow") {
  const FlowResult f = xi_flow({0.0, 0.05, 0.1}, 22.0);
  REQUIRE(f.tables.size() == 3);
  REQUIRE(f.zero_counts.size() == 3);
  CHECK(f.zero_counts[0] == 2);
  CHECK(f.tables[0].zeros[0].z == doctest::Approx(14.134725).epsilon(1e-7));
  for (const auto& p : f.points) CHECK_FALSE(p.ambiguous);
}
