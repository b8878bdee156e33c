#include <cmath>
#include <random>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/schoenberg.hpp"

using namespace pfz;
using C = std::complex<double>;

namespace {

SchoenbergParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-8.0, 8.0);
  std::uniform_real_distribution<double> drift(-3.0, 3.0);
  std::uniform_real_distribution<double> gauss(0.0, 2.0);
  std::uniform_int_distribution<int> count(0, 4);
  std::vector<double> cs(count(rng));
  for (double& c : cs) {
    do c = coef(rng);
    while (std::abs(c) < 1e-3);
  }
  return {drift(rng), gauss(rng), cs};
}

}  // namespace

TEST_CASE("eval_p examples") {
  CHECK(eval_p(SchoenbergParams::gue(), 1.0).real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(eval_p(SchoenbergParams::gue(), 1.0).imag() == 0.0);
  CHECK(eval_p(SchoenbergParams(1.3, 0.2, {1.0, -2.0, 0.5}), 0.0) == C(1.0, 0.0));
  CHECK(eval_p(SchoenbergParams(), 3.7) == C(1.0, 0.0));
  try {
    eval_p(SchoenbergParams(0.0, 0.0, {1.0}), C(0.0, 1.0 - 1e-12));
    FAIL("expected PoleProximity");
  } catch (const PoleProximityError& e) {
    CHECK(e.kind() == ErrorKind::pole_proximity);
    CHECK(e.pole() == C(0.0, 1.0));
  }
}

TEST_CASE("SchoenbergParams validation and canonical order") {
  CHECK_THROWS_AS(SchoenbergParams(0.0, -1.0, {}), Error);
  CHECK_THROWS_AS(SchoenbergParams(0.0, 0.0, {0.0}), Error);
  CHECK_THROWS_AS(SchoenbergParams(0.0, 0.0, {std::nan("")}), Error);
  const SchoenbergParams a(0.0, 0.0, {1.0, -2.0, 2.0, -0.5});
  CHECK(a.coeffs() == std::vector<double>{2.0, -2.0, 1.0, -0.5});
  CHECK(a == SchoenbergParams(0.0, 0.0, {-0.5, 2.0, 1.0, -2.0}));
}

TEST_CASE("poles") {
  CHECK(poles(SchoenbergParams()).empty());
  CHECK(poles(SchoenbergParams(0.0, 0.0, {1.0})) == std::vector<C>{C(0.0, 1.0)});
  CHECK(poles(SchoenbergParams(0.0, 0.0, {2.0, -1.0})) == std::vector<C>{C(0.0, 0.5), C(0.0, -1.0)});
}

TEST_CASE("validate") {
  const auto gue = validate(SchoenbergParams::gue());
  CHECK(gue.rho_finite);
  CHECK(gue.rho_nonnegative);
  const auto one = validate(SchoenbergParams(0.0, 0.0, {1.0}));
  CHECK(one.rho_finite);
  CHECK(one.rho_nonnegative);
  CHECK_FALSE(validate(SchoenbergParams(-1.0, 0.0, {})).rho_finite);
  CHECK_FALSE(validate(SchoenbergParams(0.0, 1.0, {-1.0})).rho_nonnegative);
}

TEST_CASE("|p(t)| <= 1 on the real line") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tdist(-50.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const SchoenbergParams params = random_params(rng);
    const double t = tdist(rng);
    CHECK(std::abs(eval_p(params, t)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("conjugate symmetry p(-conj t) = conj p(t)") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> part(-3.0, 3.0);
  for (int i = 0; i < 500; ++i) {
    const SchoenbergParams params = random_params(rng);
    const C t(part(rng), part(rng));
    C lhs, rhs;
    try {
      lhs = eval_p(params, -std::conj(t));
      rhs = std::conj(eval_p(params, t));
    } catch (const PoleProximityError&) {
      continue;
    }
    CHECK(std::abs(lhs - rhs) <= 4.0 * 2.2e-16 * std::abs(rhs) + 1e-300);
  }
}

TEST_CASE("combined parameters multiply characteristic functions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> tdist(-10.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    const SchoenbergParams a = random_params(rng);
    const SchoenbergParams b = random_params(rng);
    const double t = tdist(rng);
    const C product = eval_p(a, t) * eval_p(b, t);
    const C combined = eval_p(a.combined_with(b), t);
    // Each factor is O(1) relative to the result's phase; the exponent of
    // e^{i(omega + sum d_j) t} carries an absolute phase error of about
    // u * |t| * (|omega| + sum |d_j|), which dominates the 4-ulp budget.
    double phase_scale = std::abs(a.omega()) + std::abs(b.omega());
    for (double c : a.coeffs()) phase_scale += std::abs(c);
    for (double c : b.coeffs()) phase_scale += std::abs(c);
    const double tol = 4.0 * 2.2e-16 * std::abs(combined) * (1.0 + phase_scale * std::abs(t) + 12.0);
    CHECK(std::abs(product - combined) <= tol);
  }
}

TEST_CASE("degenerate parameters give p = 1 exactly") {
  for (double t : {-5.0, 0.0, 0.3, 40.0}) CHECK(eval_p(SchoenbergParams(0.0, 0.0, {}), t) == C(1.0, 0.0));
}
