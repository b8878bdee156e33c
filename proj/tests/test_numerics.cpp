#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/numerics/extended_real.hpp"
#include "pfz/numerics/quadrature.hpp"
#include "pfz/numerics/special.hpp"

using namespace pfz;

namespace {

double rel_diff(const ExtendedReal& a, const ExtendedReal& b) {
  return std::abs((a - b).to_double()) / std::abs(b.to_double());
}

__int128 as_int(double v) { return static_cast<__int128>(v); }

}  // namespace

TEST_CASE("two_sum and two_prod are error free (exact integer replay)") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<long long> mant(-(1LL << 52), 1LL << 52);
  std::uniform_int_distribution<int> ex(0, 5);
  for (int i = 0; i < 20000; ++i) {
    const double a = std::ldexp(static_cast<double>(mant(rng)), ex(rng));
    const double b = std::ldexp(static_cast<double>(mant(rng)), ex(rng));
    double s, e;
    eft::two_sum(a, b, s, e);
    CHECK(as_int(s) + as_int(e) == as_int(a) + as_int(b));
    double p, q;
    eft::two_prod(a, b, p, q);
    CHECK(as_int(p) + as_int(q) == as_int(a) * as_int(b));
  }
}

TEST_CASE("double-double transcendental functions reach ~30 digits") {
  const auto e = ExtendedReal::parse("2.718281828459045235360287471352662497757");
  CHECK(rel_diff(exp(ExtendedReal(1.0)), e) < 1e-30);
  CHECK(rel_diff(exp(ExtendedReal(-20.0)),
                 ExtendedReal::parse("2.061153622438557827965940380155820976376e-9")) < 1e-30);
  CHECK(rel_diff(log(ExtendedReal(3.0)),
                 ExtendedReal::parse("1.098612288668109691395245236922525704647")) < 1e-30);
  CHECK(rel_diff(sin(ExtendedReal(100.0)),
                 ExtendedReal::parse("-0.506365641109758793656557610459785432065")) < 1e-29);
  CHECK(rel_diff(cos(ExtendedReal(123.456)),
                 ExtendedReal::parse("-0.5947139710921574359004732811136368641331")) < 1e-29);
  CHECK(std::abs((cos(xconst::pi()) + 1.0).to_double()) < 1e-31);
  CHECK(std::abs((sin(xconst::pi() / 6.0) - 0.5).to_double()) < 1e-31);
  const ExtendedReal x = ExtendedReal(7.25) / 3.0;
  CHECK(std::abs((log(exp(x)) - x).to_double()) < 1e-30);
  CHECK(std::abs((sqrt(ExtendedReal(2.0)) - xconst::sqrt2()).to_double()) < 1e-31);
  ExtendedReal s, c;
  sincos(ExtendedReal(-41.3), s, c);
  CHECK(std::abs((s * s + c * c - 1.0).to_double()) < 1e-30);
}

TEST_CASE("Gauss panel integrates polynomials of degree 2n-1 within 10 ulp") {
  for (int n : {4, 10, 20}) {
    const GaussRule& rule = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) sum += rule.weights_native[k] * std::pow(rule.nodes_native[k], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(sum - exact) <= 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, exact));
    }
  }
}

TEST_CASE("integrate_adaptive examples") {
  SUBCASE("polynomial") {
    const auto r = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(std::abs(r.value.real() - 1.0 / 3.0) < 1e-15);
  }
  SUBCASE("Gaussian with automatic truncation") {
    const auto r = integrate_adaptive([](double u) { return std::exp(-u * u); },
                                      -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
    CHECK(std::abs(r.value.real() - std::sqrt(std::numbers::pi)) < 1e-12);
  }
  SUBCASE("quartic exponential against the Gamma identity") {
    const auto r = integrate_adaptive([](double u) { return std::exp(-u * u * u * u); }, 0.0,
                                      std::numeric_limits<double>::infinity());
    CHECK(std::abs(r.value.real() - gamma_fn(1.25)) < 1e-13);
    CHECK(std::abs(r.value.real() - 0.9064024770554770779) < 1e-13);
  }
  SUBCASE("extended mode tightens the result") {
    QuadratureConfig qc;
    PrecisionConfig pc{PrecisionMode::extended, 1e-6};
    Integrand f;
    f.value = [](double u) { return std::complex<double>(std::exp(-u * u), 0.0); };
    f.value_extended = [](const ExtendedReal& u) { return ExtendedComplex(exp(-(u * u))); };
    const auto r = integrate_adaptive(f, -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity(), qc, pc);
    const ExtendedReal root_pi = sqrt(xconst::pi());
    CHECK(std::abs((r.value_extended.re - root_pi).to_double()) < 1e-29);
  }
}

TEST_CASE("integrate_adaptive escalates on cancellation and is deterministic") {
  Integrand f;
  f.value = [](double u) { return std::exp(std::complex<double>(-0.5 * u * u, 8.0 * u)); };
  f.value_extended = [](const ExtendedReal& u) {
    return exp(ExtendedComplex(-(u * u) * 0.5, u * 8.0));
  };
  f.frequency = 8.0;
  const double inf = std::numeric_limits<double>::infinity();
  const auto r1 = integrate_adaptive(f, -inf, inf);
  const auto r2 = integrate_adaptive(f, -inf, inf);
  CHECK(r1.escalated);
  CHECK(r1.precision == PrecisionMode::extended);
  // sqrt(2 pi) e^{-32}
  const double exact = std::sqrt(2.0 * std::numbers::pi) * std::exp(-32.0);
  CHECK(std::abs(r1.value.real() - exact) < 1e-10 * exact);
  CHECK(r1.value == r2.value);
  CHECK(r1.value_extended.re.lo() == r2.value_extended.re.lo());
}

TEST_CASE("integrate_adaptive errors") {
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0), Error);
  try {
    integrate_adaptive([](double x) { return x > 0.5 ? std::nan("") : x; }, 0.0, 1.0);
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite);
  }
  QuadratureConfig qc;
  qc.max_refinements = 2;
  try {
    integrate_adaptive([](double x) { return std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, qc);
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
  }
  qc.panel_order = 3;
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return x; }, 0.0, 1.0, qc), Error);
}

TEST_CASE("integrate_adaptive stops refining noisy samples") {
  // Deterministic sample noise of size 1e-12 on a Gaussian.
  auto noisy = [](double x) {
    const double jitter = std::sin(1e7 * x) * 1e-12;
    return std::complex<double>(std::exp(-x * x) + jitter, 0.0);
  };
  Integrand f;
  f.value = noisy;
  const QuadratureResult r = integrate_adaptive(f, -6.0, 6.0, {}, {});
  CHECK(r.noise_limited_panels > 0);
  CHECK(r.value.real() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
  CHECK(r.evaluations < 2000000);

  // Declaring the noise lets the floor accept those panels directly.
  f.noise = [](double) { return 1e-12 / std::numeric_limits<double>::epsilon(); };
  const QuadratureResult d = integrate_adaptive(f, -6.0, 6.0, {}, {});
  CHECK(d.noise_limited_panels == 0);
  CHECK(d.evaluations < r.evaluations);
  CHECK(d.value.real() == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("gamma_fn") {
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK(gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
  CHECK(gamma_fn(0.25) == doctest::Approx(3.625609908221908311930685).epsilon(1e-13));
  // Reflection oracle: Gamma(1/4) Gamma(3/4) = pi sqrt 2.
  CHECK(gamma_fn(0.25) * gamma_fn(0.75) ==
        doctest::Approx(std::numbers::pi * std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_fn(0.0), Error);
  CHECK_THROWS_AS(gamma_fn(-1.5), Error);
}

TEST_CASE("gamma_extended and complex log_gamma") {
  const auto g34 = ExtendedReal::parse("1.225416702465177645129098303362890526851");
  // exp() of a log-gamma near 150 limits the result to ~30 digits.
  CHECK(rel_diff(gamma_extended(ExtendedReal(0.75)), g34) < 5e-30);
  CHECK(rel_diff(gamma_extended(ExtendedReal(5.0)), ExtendedReal(24.0)) < 5e-30);
  const std::complex<double> lg = log_gamma({0.25, 0.0});
  CHECK(std::exp(lg.real()) == doctest::Approx(3.6256099082219083).epsilon(1e-13));
  // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
  const double t = 7.0;
  const double mag2 = std::exp(2.0 * log_gamma({0.5, t}).real());
  CHECK(mag2 == doctest::Approx(std::numbers::pi / std::cosh(std::numbers::pi * t)).epsilon(1e-12));
}

TEST_CASE("hyper0f2") {
  CHECK(hyper0f2(1.0, 1.0, 0.0) == 1.0);
  CHECK(hyper0f2(0.5, 0.75, 0.0) == 1.0);
  // Direct partial sums of sum 1/(n!)^3.
  double oracle = 0.0, fact = 1.0;
  for (int n = 0; n < 30; ++n) {
    if (n > 0) fact *= n;
    oracle += 1.0 / (fact * fact * fact);
  }
  CHECK(hyper0f2(1.0, 1.0, 1.0) == doctest::Approx(oracle).epsilon(1e-15));
  CHECK(hyper0f2(1.0, 1.0, 1.0) == doctest::Approx(2.1297025489833064).epsilon(1e-15));
  CHECK(hyper0f2(0.5, 0.75, -50.0) == doctest::Approx(-72.22703070449956981).epsilon(1e-13));
  CHECK_THROWS_AS(hyper0f2(-1.0, 1.0, 1.0), Error);
}
