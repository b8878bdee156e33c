#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/io.hpp"
#include "pfz/pfreq.hpp"

using namespace pfz;

namespace {

const double kInvRoot2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

double gaussian_f(double a) { return kInvRoot2Pi * std::exp(-0.5 * a * a); }

SchoenbergParams random_positive_params(std::mt19937_64& rng, int max_coeffs) {
  std::uniform_real_distribution<double> coef(0.2, 2.0), gauss(0.1, 1.0);
  std::uniform_int_distribution<int> count(0, max_coeffs);
  std::vector<double> cs(count(rng));
  for (double& c : cs) c = coef(rng);
  return {0.0, gauss(rng), cs};
}

}  // namespace

TEST_CASE("eval_f examples") {
  CHECK(eval_f(SchoenbergParams::gue(), 0.0) == doctest::Approx(kInvRoot2Pi).epsilon(1e-13));
  CHECK(eval_f(SchoenbergParams::gue(), 1.7) == doctest::Approx(gaussian_f(1.7)).epsilon(1e-12));
  const SchoenbergParams two(0.0, 0.0, {1.0, 1.0});
  CHECK(eval_f(two, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(eval_f(two, 2.5) == 0.0);
  CHECK(eval_f(two, -0.5) == doctest::Approx(2.5 * std::exp(-2.5)).epsilon(1e-15));
  CHECK_THROWS_AS(eval_f_quadrature(SchoenbergParams(0.0, 0.0, {1.0}), 0.0), Error);
  try {
    eval_f(SchoenbergParams(), 0.0);
    FAIL("expected NonIntegrableTransform");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_integrable_transform);
  }
}

TEST_CASE("closed form of f against convolution oracles") {
  // a - 3 = -(E1 + 2 E2): hypoexponential density e^{-s/2} - e^{-s}.
  const SchoenbergParams distinct(0.0, 0.0, {1.0, 2.0});
  for (double s : {0.1, 1.0, 2.0, 7.5})
    CHECK(eval_f(distinct, 3.0 - s) == doctest::Approx(std::exp(-s / 2.0) - std::exp(-s)).epsilon(1e-13));
  // E2 - E1 is Laplace.
  const SchoenbergParams mixed(0.0, 0.0, {1.0, -1.0});
  for (double a : {-2.0, -0.3, 0.4, 3.0})
    CHECK(eval_f(mixed, a) == doctest::Approx(0.5 * std::exp(-std::abs(a))).epsilon(1e-14));
  // Gamma(3): s^2 e^{-s} / 2 at s = 3 - a; shifted by omega.
  const SchoenbergParams triple(0.5, 0.0, {1.0, 1.0, 1.0});
  for (double s : {0.5, 2.0, 4.0})
    CHECK(eval_f(triple, 3.5 - s) == doctest::Approx(s * s * std::exp(-s) / 2.0).epsilon(1e-14));
  // Double-double evaluation agrees with the native one.
  const SchoenbergParams multi(0.0, 0.0, {2.0, 2.0, 1.0, -0.5});
  for (double a : {-1.0, 0.5, 2.0})
    CHECK(eval_f_closed_form(multi, ExtendedReal(a)).to_double() ==
          doctest::Approx(eval_f_closed_form(multi, a)).epsilon(1e-13));
}

TEST_CASE("f is a normalized, centered density") {
  const auto check = [](const SchoenbergParams& params) {
    // Far-tail values are tiny and cancel; native noise is far below 1e-8 here.
    const PrecisionConfig no_escalation{PrecisionMode::native, 1e-300};
    const auto f = [&params, no_escalation](double a) { return eval_f(params, a, {}, no_escalation); };
    QuadratureConfig outer;
    outer.abs_tol = 1e-11;
    outer.rel_tol = 1e-10;
    // Exponential tails decay at rate 1 / max |d_j|; probing them through
    // noisy tail values would walk far out, so the radius is fixed.
    double widest = std::sqrt(params.d());
    for (double c : params.coeffs()) widest = std::max(widest, std::abs(c));
    outer.truncation_radius = 10.0 + 36.0 * widest;
    const double inf = std::numeric_limits<double>::infinity();
    // f has one-sided exponential tails; its own value bounds them.
    Integrand mass;
    mass.value = [&f](double a) { return std::complex<double>(f(a), 0.0); };
    mass.envelope = [&f](double a) { return std::abs(f(a)); };
    Integrand mean;
    mean.value = [&f](double a) { return std::complex<double>(a * f(a), 0.0); };
    mean.envelope = [&f](double a) { return std::abs(f(a)) * (1.0 + std::abs(a)); };
    CHECK(std::abs(integrate_adaptive(mass, -inf, inf, outer).value.real() - 1.0) < 1e-8);
    CHECK(std::abs(integrate_adaptive(mean, -inf, inf, outer).value.real() - params.omega()) < 1e-8);
  };
  check(SchoenbergParams::gue());
  check(SchoenbergParams(0.0, 0.0, {1.0, 2.0, -0.5}));
  check(SchoenbergParams(0.0, 0.3, {1.0, 0.5}));
  check(SchoenbergParams(0.0, 0.2, {0.8, 0.6, 0.3}));
}

TEST_CASE("check_pf_minors examples") {
  const DensitySource gue = schoenberg_source(SchoenbergParams::gue());
  const TPReport two = check_pf_minors(gue, {0.0, 1.0}, {0.0, 1.0}, 2);
  REQUIRE(two.orders.size() == 2);
  CHECK(two.orders[1].min_minor == doctest::Approx((1.0 - std::exp(-1.0)) / (2.0 * std::numbers::pi)).epsilon(1e-10));
  CHECK(two.orders[0].min_minor >= 0.0);
  CHECK_FALSE(two.violation);

  const TPReport bimodal = check_pf_minors(bimodal_control_source(3.0), {0.0, 3.0}, {0.0, 3.0}, 2);
  const double f0 = gaussian_f(3.0), f3 = 0.5 * (gaussian_f(0.0) + gaussian_f(6.0));
  CHECK(bimodal.orders[1].min_minor == doctest::Approx(f0 * f0 - f3 * f3).epsilon(1e-12));
  CHECK(bimodal.orders[1].min_minor == doctest::Approx(-0.0398).epsilon(2e-3));
  CHECK(bimodal.violation);
  CHECK(bimodal.min_rows == std::vector<double>{0.0, 3.0});

  CHECK_THROWS_AS(check_pf_minors(gue, {0.0, 1.0}, {0.0}, 2), Error);
  CHECK_THROWS_AS(check_pf_minors(gue, {1.0, 0.0}, {0.0, 1.0}, 1), Error);
  CHECK_THROWS_AS(check_pf_minors(gue, {0.0, 1.0}, {0.0, 1.0}, 6), Error);
}

TEST_CASE("order-1 minors of any density are nonnegative") {
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(0.5 * i);
  const TPReport r = check_pf_minors(bimodal_control_source(), grid, grid, 1);
  CHECK(r.orders[0].min_minor >= 0.0);
  CHECK(r.orders[0].minors_evaluated == 21 * 21);
}

TEST_CASE("the bimodal control fails at order 2 on any grid spanning it") {
  std::vector<double> grid;
  for (int i = -8; i <= 8; ++i) grid.push_back(0.5 * i);
  for (double shift : {2.0, 3.0, 4.0}) CHECK(check_pf_minors(bimodal_control_source(shift), grid, grid, 2).violation);
}

TEST_CASE("Schoenberg densities pass the minor test up to order 3") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 3; ++trial) {
    const SchoenbergParams params = random_positive_params(rng, 4);
    std::vector<double> grid;
    for (int i = 0; i < 9; ++i) grid.push_back(-3.0 + 0.75 * i);
    const TPReport r = check_pf_minors(schoenberg_source(params), grid, grid, 3);
    CHECK(r.min_minor >= -1e-9);
    CHECK_FALSE(r.violation);
  }
}

TEST_CASE("minor subsampling is seeded and reproducible") {
  std::vector<double> grid;
  for (int i = 0; i < 30; ++i) grid.push_back(-3.0 + 0.2 * i);
  const DensitySource gue = closed_form_source("gaussian", gaussian_f);
  MinorCheckOptions opts;
  opts.exhaustive_limit = 1000;
  opts.sample_count = 500;
  const TPReport a = check_pf_minors(gue, grid, grid, 3, opts);
  const TPReport b = check_pf_minors(gue, grid, grid, 3, opts);
  CHECK(a.orders[2].sampled);
  CHECK(a.orders[2].minors_evaluated == 500);
  CHECK(a.min_minor == b.min_minor);
  CHECK(a.min_rows == b.min_rows);
}

TEST_CASE("check_derivative_minors examples") {
  const DensitySource gue = schoenberg_source(SchoenbergParams::gue());
  const TPReport one = check_derivative_minors(gue, {0.0}, 1);
  CHECK(one.min_minor == doctest::Approx(kInvRoot2Pi).epsilon(1e-12));
  // det [[f(1), f(0)], [f'(1), f'(0)]] with f'(a) = -a f(a).
  const double oracle = gaussian_f(0.0) * gaussian_f(1.0);
  const TPReport fine = check_derivative_minors(gue, {1.0, 0.0}, 2, 1e-3);
  const TPReport coarse = check_derivative_minors(gue, {1.0, 0.0}, 2, 1e-2);
  CHECK(fine.orders[1].min_minor == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(std::abs(coarse.orders[1].min_minor - fine.orders[1].min_minor) < 1e-4 * oracle);
  CHECK(std::abs(coarse.orders[1].min_minor - oracle) > std::abs(fine.orders[1].min_minor - oracle));
  CHECK_FALSE(fine.violation);
  const TPReport four = check_derivative_minors(gue, {1.5, 0.5, -0.5, -1.5}, 4);
  CHECK(four.min_minor >= -1e-9);
  CHECK(four.differentiation_error < 1e-5);
}

TEST_CASE("derivative minors flag the support boundary of a one-sided exponential") {
  const DensitySource one_sided = schoenberg_source(SchoenbergParams(0.0, 0.0, {1.0}));
  try {
    check_derivative_minors(one_sided, {1.0, 0.5, 0.0}, 3);
    FAIL("expected NonSmoothPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_smooth_point);
  }
  CHECK_NOTHROW(check_derivative_minors(one_sided, {0.5, 0.0, -0.5}, 3));
  CHECK_THROWS_AS(check_derivative_minors(one_sided, {0.0, 0.5}, 2), Error);
}

TEST_CASE("tabulated densities interpolate and load from CSV") {
  std::vector<double> xs, ys;
  for (int i = -60; i <= 60; ++i) {
    xs.push_back(0.1 * i);
    ys.push_back(gaussian_f(0.1 * i));
  }
  const DensitySource tab = tabulated_source(xs, ys, 3);
  CHECK(tab.value(0.25) == doctest::Approx(gaussian_f(0.25)).epsilon(1e-5));
  CHECK(tab.value(7.0) == 0.0);
  CHECK_THROWS_AS(tabulated_source({0.0, 0.0}, {1.0, 1.0}), Error);

  io::Table t;
  t.header = {"a", "f"};
  for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({io::format_double(xs[i]), io::format_double(ys[i])});
  const auto path = (std::filesystem::temp_directory_path() / "pfz_tab_density.csv").string();
  io::write_text(path, io::to_csv(t));
  const DensitySource loaded = tabulated_source_from_csv(path, 3);
  CHECK(loaded.value(0.25) == tab.value(0.25));
  const TPReport r = check_pf_minors(loaded, {-1.0, 0.0, 1.0}, {-1.0, 0.0, 1.0}, 3);
  CHECK_FALSE(r.violation);
  std::filesystem::remove(path);
}
