#include <cmath>
#include <numbers>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/numerics/special.hpp"
#include "pfz/ztransform.hpp"

using namespace pfz;

namespace {

const double kGueMass = 2.155800549540927872752586;
const double kSqrt2Pi = std::sqrt(2.0 * std::numbers::pi);

ZSpec rho_z(double omega, double d, std::vector<double> cs, double b = 0.0, int m = 0) {
  return {RhoSpec{SchoenbergParams(omega, d, std::move(cs)), m}, b};
}

ZSpec gaussian() { return rho_z(0.5, 0.0, {}); }
ZSpec one_coeff(double b = 0.0) { return rho_z(0.0, 0.0, {1.0}, b); }
ZSpec gue() { return {RhoSpec::gue(), 0.0}; }

ZOptions quadrature_only() {
  ZOptions o;
  o.route = ZRoute::quadrature;
  return o;
}

}  // namespace

TEST_CASE("quadrature values") {
  CHECK(eval_quadrature(gaussian(), 0.0).value.real() == doctest::Approx(kSqrt2Pi).epsilon(1e-13));
  CHECK(eval_quadrature(gaussian(), 2.0).value.real() ==
        doctest::Approx(kSqrt2Pi * std::exp(-2.0)).epsilon(1e-12));
  CHECK(eval_quadrature(gue(), 0.0).value.real() == doctest::Approx(kGueMass).epsilon(1e-13));
  const double expected = std::sqrt(std::numbers::pi) * std::exp(-1.0) / 2.0;
  const ZValue v = eval_quadrature(one_coeff(), 2.0);
  CHECK(v.value.real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(v.value.imag() == 0.0);
}

TEST_CASE("evenness and conjugate symmetry") {
  for (double z : {0.3, 1.7, 4.2}) {
    const double plus = eval_quadrature(gue(), z).value.real();
    const double minus = eval_quadrature(gue(), -z).value.real();
    CHECK(std::abs(plus - minus) <= 1e-13 * kGueMass);
  }
  const std::complex<double> z(1.3, 0.7);
  const std::complex<double> a = eval_quadrature(gue(), z).value;
  const std::complex<double> b = eval_quadrature(gue(), std::conj(z)).value;
  CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a));
}

TEST_CASE("closed form matches quadrature") {
  for (const ZSpec& zs : {gaussian(), one_coeff(), one_coeff(0.5), rho_z(0.2, 0.0, {1.0, 0.5, 0.5}, 0.1, 1)}) {
    for (std::complex<double> z : {std::complex<double>(0.0, 0.0), {2.0, 0.0}, {2.0, 1.0}, {5.5, -0.4}}) {
      const std::complex<double> q = eval_quadrature(zs, z).value;
      const std::complex<double> c = eval_closed_form(zs, z).value();
      CHECK(std::abs(q - c) <= 1e-12 * (1.0 + std::abs(c)));
      const std::complex<double> dq = eval_derivative(zs, z).value;
      const std::complex<double> dc = eval_closed_form_derivative(zs, z).value();
      CHECK(std::abs(dq - dc) <= 1e-11 * (1.0 + std::abs(dc)));
    }
  }
  CHECK_THROWS_AS(eval_closed_form(gue(), 1.0), Error);
}

TEST_CASE("closed form stays finite far out") {
  const ScaledValue v = eval_closed_form(one_coeff(), 80.0);
  CHECK(std::isfinite(v.mantissa.real()));
  CHECK(v.log_scale.real() < -1500.0);
  CHECK(v.value() == std::complex<double>(0.0, 0.0));
  CHECK(v.signal_to_noise() > 1e10);
}

TEST_CASE("derivative matches central differences") {
  const double h = 1e-4;
  for (double z : {0.5, 2.0, 3.7}) {
    const double fd =
        (eval_quadrature(gue(), z + h).value.real() - eval_quadrature(gue(), z - h).value.real()) / (2.0 * h);
    CHECK(eval_derivative(gue(), z).value.real() == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("moment series matches quadrature") {
  const ZSeries series(gue(), 160);
  for (double z : {0.0, 1.0, 3.0, 5.0}) {
    const SeriesValue s = series.eval(z);
    const double q = eval_quadrature(gue(), z).value.real();
    CHECK(std::abs(s.value.real() - q) <= 1e-10);
    CHECK(s.truncation_bound < 1e-10);
  }
  const SeriesValue g = eval_series(gaussian(), 1.5, 80);
  CHECK(g.value.real() == doctest::Approx(kSqrt2Pi * std::exp(-1.125)).epsilon(1e-12));
  CHECK_THROWS_AS(series.eval(80.0), Error);
}

TEST_CASE("GUE hypergeometric representation") {
  const HypergeomValue h0 = eval_gue_hypergeom(0.0);
  CHECK(h0.value == doctest::Approx(gamma_fn(0.25) / 2.0).epsilon(1e-15));
  CHECK(gue_z_via_hypergeom(0.0).value == doctest::Approx(kGueMass).epsilon(1e-15));
  for (double z : {1.0, 4.0, 8.0, 12.0}) {
    const PrecisionConfig extended{PrecisionMode::extended, 1e-6};
    const double h = gue_z_via_hypergeom(z, extended).value;
    const double q = eval_quadrature(gue(), z).value.real();
    CHECK(std::abs(h - q) <= 1e-12);
  }
  CHECK(gue_hypergeom_envelope(0.0) == doctest::Approx(gamma_fn(0.25) / 2.0));
  // Far enough out the cancelling branches exceed any double-double budget.
  CHECK_THROWS_AS(eval_gue_hypergeom(60.0, {PrecisionMode::extended, 1e-6}), Error);
}

TEST_CASE("low-precision emulation loses the small values first") {
  const HypergeomValue small = gue_hypergeom_raw(1.0, PrecisionMode::native, 10);
  const HypergeomValue exact = gue_hypergeom_raw(1.0, PrecisionMode::extended);
  CHECK(small.value == doctest::Approx(exact.value).epsilon(1e-8));
  const HypergeomValue far = gue_hypergeom_raw(16.0, PrecisionMode::native, 10);
  const HypergeomValue far_exact = gue_hypergeom_raw(16.0, PrecisionMode::extended);
  CHECK(std::abs(far.value - far_exact.value) > 10.0 * std::abs(far_exact.value));
}

TEST_CASE("second difference roughness") {
  std::vector<double> smooth, rough;
  for (int i = 0; i < 50; ++i) {
    smooth.push_back(std::sin(0.1 * i));
    rough.push_back(std::sin(0.1 * i) + (i % 2 ? 1e-2 : -1e-2));
  }
  CHECK(second_difference_roughness(smooth, 0.1) < 1.1);
  CHECK(second_difference_roughness(rough, 0.1) > 3.0);
  CHECK_THROWS_AS(second_difference_roughness({1.0, 2.0}, 0.1), Error);
}

TEST_CASE("custom densities") {
  CustomDensity c;
  c.name = "box";
  c.value = [](double) { return 1.0; };
  c.support_radius = 1.0;
  const ZSpec box{c, 0.0};
  CHECK(eval_quadrature(box, 0.0).value.real() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eval_quadrature(box, 2.0).value.real() == doctest::Approx(std::sin(2.0)).epsilon(1e-13));

  CustomDensity odd;
  odd.name = "tilted";
  odd.value = [](double u) { return std::exp(-u * u + 0.1 * u); };
  CHECK_THROWS_AS(ZSpec({odd, 0.0}).validate(), Error);
  CHECK_THROWS_AS(ZSpec({box.source, -1.0}).validate(), Error);
}

TEST_CASE("routes") {
  CHECK(resolve_route(one_coeff(), ZRoute::automatic) == ZRoute::closed_form);
  CHECK(resolve_route(gue(), ZRoute::automatic) == ZRoute::quadrature);
  CHECK_THROWS_AS(resolve_route(gue(), ZRoute::closed_form), Error);
  CHECK(std::string(to_string(ZRoute::quadrature)) == "quadrature");
}

TEST_CASE("real zeros of the one-coefficient transform") {
  for (auto [b, expected] : {std::pair{0.0, 6.0}, {0.5, 12.0}, {1.0, 20.0}}) {
    const ZeroTable t = find_real_zeros(one_coeff(b), 8.0);
    REQUIRE(t.zeros.size() == 1);
    CHECK(t.zeros[0].z == doctest::Approx(std::sqrt(expected)).epsilon(1e-12));
    CHECK(t.zeros[0].accepted);
  }
  const ZeroTable q = find_real_zeros(one_coeff(), 4.0, quadrature_only());
  REQUIRE(q.zeros.size() == 1);
  CHECK(q.zeros[0].z == doctest::Approx(std::sqrt(6.0)).epsilon(1e-10));
  CHECK(q.method.find("route=quadrature") != std::string::npos);
  CHECK(find_real_zeros(gaussian(), 10.0).zeros.empty());
}

TEST_CASE("rectangle counts") {
  CHECK(count_zeros_rect(one_coeff(), {2.0, 3.0, 1.0}).count == 1);
  CHECK(count_zeros_rect(one_coeff(), {3.0, 4.0, 1.0}).count == 0);
  CHECK(count_zeros_rect(gaussian(), {0.0, 10.0, 5.0}).count == 0);
  const RectCount q = count_zeros_rect(one_coeff(), {2.0, 3.0, 1.0}, quadrature_only());
  CHECK(q.count == 1);
  CHECK(q.distance_from_integer < 1e-6);
  // u^2 e^{-u^2/2} transforms to sqrt(2 pi)(1 - z^2)e^{-z^2/2}.
  CHECK(count_zeros_rect(rho_z(0.5, 0.0, {}, 0.0, 1), {-2.0, 2.0, 0.5}).count == 2);
}

TEST_CASE("reality verification") {
  const RealityReport r = verify_reality(one_coeff(), 10.0, 2.0);
  CHECK(r.pass);
  CHECK(r.real_count == 1);
  CHECK(r.rect_count == 1);
  const RealityReport g = verify_reality(gue(), 12.0, 1.0);
  CHECK(g.pass);
  CHECK(g.real_count == g.rect_count);
}

TEST_CASE("zero flow along b") {
  const FlowResult f = flow_zeros(one_coeff(), {0.0, 0.5, 1.0}, 6.0);
  REQUIRE(f.zero_counts == std::vector<int>{1, 1, 1});
  REQUIRE(f.points.size() == 3);
  CHECK(f.points[0].z == doctest::Approx(std::sqrt(6.0)));
  CHECK(f.points[1].z == doctest::Approx(std::sqrt(12.0)));
  CHECK(f.points[2].z == doctest::Approx(std::sqrt(20.0)));
  for (const auto& p : f.points) {
    CHECK(p.zero_index == 0);
    CHECK_FALSE(p.discontinuity);
  }
  const FlowResult g = flow_zeros(gaussian(), {0.0, 0.5, 1.0}, 10.0);
  CHECK(g.points.empty());
  CHECK(g.zero_counts == std::vector<int>{0, 0, 0});
}
