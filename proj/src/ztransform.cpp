#include "pfz/ztransform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pfz/errors.hpp"
#include "pfz/io.hpp"
#include "pfz/numerics/special.hpp"

namespace pfz {

namespace {

const RhoSpec* rho_of(const ZSpec& zs) { return std::get_if<RhoSpec>(&zs.source); }
const CustomDensity* custom_of(const ZSpec& zs) { return std::get_if<CustomDensity>(&zs.source); }

}  // namespace

void ZSpec::validate() const {
  if (!(b >= 0.0) || !std::isfinite(b)) throw Error(ErrorKind::invalid_spec, "b must be finite and >= 0");
  if (const RhoSpec* r = rho_of(*this)) {
    r->validate();
    return;
  }
  const CustomDensity& c = *custom_of(*this);
  if (!c.value) throw Error(ErrorKind::invalid_spec, "custom density needs an evaluator");
  if (!(c.support_radius > 0.0)) throw Error(ErrorKind::invalid_spec, "support radius must be positive");
  // Differences are measured against the density scale, so tails that are
  // zero on one side and roundoff on the other still pass.
  const double peak = std::abs(c.value(0.0));
  for (double probe : {0.1, 0.37, 0.5, 0.9, 1.3, 2.2, 2.9}) {
    if (probe >= c.support_radius) break;
    const double plus = c.value(probe), minus = c.value(-probe);
    if (!std::isfinite(plus) || !std::isfinite(minus))
      throw Error(ErrorKind::invalid_spec, "custom density is not finite at u = +-" + io::format_double(probe));
    if (std::abs(plus - minus) > 1e-12 * std::max({peak, std::abs(plus), std::abs(minus)}))
      throw Error(ErrorKind::invalid_spec, "custom density '" + c.name + "' is not even at u = +-" +
                                               io::format_double(probe));
  }
}

bool ZSpec::has_closed_form() const {
  const RhoSpec* r = rho_of(*this);
  return r && r->params.d() == 0.0;
}

ZSpec ZSpec::with_b(double new_b) const {
  ZSpec out = *this;
  out.b = new_b;
  return out;
}

std::string ZSpec::describe() const {
  std::ostringstream os;
  if (const RhoSpec* r = rho_of(*this)) {
    os << "rho(omega=" << io::format_double(r->params.omega()) << ", d=" << io::format_double(r->params.d())
       << ", coeffs=[";
    for (std::size_t i = 0; i < r->params.coeffs().size(); ++i)
      os << (i ? "," : "") << io::format_double(r->params.coeffs()[i]);
    os << "], m=" << r->m << ")";
  } else {
    os << "custom(" << custom_of(*this)->name << ")";
  }
  os << " b=" << io::format_double(b);
  return os.str();
}

double ZSpec::weight(double u) const {
  if (std::abs(u) > support_radius()) return 0.0;
  const double gauss = b == 0.0 ? 1.0 : std::exp(-b * u * u);
  if (const RhoSpec* r = rho_of(*this)) return density(*r, u) * gauss;
  return custom_of(*this)->value(u) * gauss;
}

ExtendedReal ZSpec::weight_extended(const ExtendedReal& u) const {
  if (std::abs(u.to_double()) > support_radius()) return ExtendedReal(0.0);
  const ExtendedReal gauss = b == 0.0 ? ExtendedReal(1.0) : exp(-(u * u) * b);
  if (const RhoSpec* r = rho_of(*this)) return density_extended(*r, u) * gauss;
  const CustomDensity& c = *custom_of(*this);
  const ExtendedReal v = c.value_extended ? c.value_extended(u) : ExtendedReal(c.value(u.to_double()));
  return v * gauss;
}

bool ZSpec::has_noise_model() const {
  const CustomDensity* c = custom_of(*this);
  return c && c->noise_scale;
}

double ZSpec::weight_noise(double u) const {
  if (std::abs(u) > support_radius()) return 0.0;
  const double gauss = b == 0.0 ? 1.0 : std::exp(-b * u * u);
  const CustomDensity* c = custom_of(*this);
  return (c && c->noise_scale ? c->noise_scale(u) : std::abs(weight(u))) * gauss;
}

double ZSpec::support_radius() const {
  if (const CustomDensity* c = custom_of(*this)) return c->support_radius;
  return std::numeric_limits<double>::infinity();
}

namespace {

ZValue transform(const ZSpec& zs, std::complex<double> z, bool derivative, const QuadratureConfig& qc,
                 const PrecisionConfig& pc) {
  zs.validate();
  const double x = z.real(), y = z.imag();
  const CustomDensity* custom = custom_of(zs);
  Integrand f;
  f.value = [&zs, x, y, derivative](double u) -> std::complex<double> {
    const double w = zs.weight(u);
    if (w == 0.0) return 0.0;
    const std::complex<double> v = w * std::exp(std::complex<double>(-y * u, x * u));
    return derivative ? std::complex<double>(0.0, u) * v : v;
  };
  f.value_extended = [&zs, x, y, derivative](const ExtendedReal& u) -> ExtendedComplex {
    const ExtendedReal w = zs.weight_extended(u);
    if (w.hi() == 0.0) return ExtendedComplex();
    const ExtendedComplex v = exp(ExtendedComplex(-(u * y), u * x)) * w;
    return derivative ? ExtendedComplex(-(v.im * u), v.re * u) : v;
  };
  f.envelope = [&zs, custom, y, derivative](double u) {
    double w = custom && custom->envelope ? custom->envelope(u) * std::exp(-zs.b * u * u) : std::abs(zs.weight(u));
    if (w == 0.0) return 0.0;
    w *= std::exp(std::abs(y * u));
    return derivative ? w * std::abs(u) : w;
  };
  if (zs.has_noise_model()) {
    f.noise = [&zs, y, derivative](double u) {
      const double w = zs.weight_noise(u) * std::exp(std::abs(y * u));
      return derivative ? w * std::abs(u) : w;
    };
  }
  f.frequency = std::abs(x);
  const double radius = zs.support_radius();
  const QuadratureResult r = integrate_adaptive(f, -radius, radius, qc, pc);

  ZValue out;
  out.value = r.value;
  out.value_extended = r.value_extended;
  out.error = r.error;
  out.abs_integral = r.abs_integral;
  out.cancellation_ratio = r.cancellation_ratio;
  out.escalated = r.escalated;
  out.precision = r.precision;
  if (y == 0.0) {
    // An even density makes Z and Z' real on the real axis.
    if (std::abs(r.value.imag()) > 1e-10 * r.abs_integral)
      throw Error(ErrorKind::non_convergence, "imaginary residue " + io::format_double(r.value.imag()) +
                                                  " exceeds 1e-10 of the absolute integral at z = " +
                                                  io::format_double(x));
    out.value = {r.value.real(), 0.0};
    out.value_extended.im = ExtendedReal(0.0);
  }
  return out;
}

}  // namespace

ZValue eval_quadrature(const ZSpec& zs, std::complex<double> z, const QuadratureConfig& qc,
                       const PrecisionConfig& pc) {
  return transform(zs, z, false, qc, pc);
}

ZValue eval_derivative(const ZSpec& zs, std::complex<double> z, const QuadratureConfig& qc,
                       const PrecisionConfig& pc) {
  return transform(zs, z, true, qc, pc);
}

namespace {

ScaledValue closed_form(const ZSpec& zs, std::complex<double> z, bool derivative) {
  if (!zs.has_closed_form()) throw Error(ErrorKind::domain_error, "closed form needs a RhoSpec with d = 0");
  zs.validate();
  const RhoSpec& r = *rho_of(zs);
  // u^{2m} prod (1 + d_j u^2) as a polynomial in s = u^2.
  std::vector<double> c{1.0};
  for (double dj : r.params.coeffs()) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k] += c[k];
      next[k + 1] += dj * c[k];
    }
    c = std::move(next);
  }
  c.insert(c.begin(), static_cast<std::size_t>(r.m), 0.0);

  const double a = r.params.omega() + r.params.coeff_sum() + zs.b;
  const double sa = std::sqrt(a);
  const std::complex<double> x = z / (2.0 * sa);
  const std::size_t order = 2 * (c.size() - 1) + 2;
  std::vector<std::complex<double>> h(order + 1);
  h[0] = 1.0;
  h[1] = 2.0 * x;
  for (std::size_t n = 1; n < order; ++n) h[n + 1] = 2.0 * x * h[n] - 2.0 * static_cast<double>(n) * h[n - 1];

  std::complex<double> sum = 0.0;
  double magnitude = 0.0;
  double factor = 1.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const std::complex<double> term = c[k] * factor * h[2 * k + (derivative ? 1 : 0)];
    sum += term;
    magnitude += std::abs(term);
    factor *= -0.25 / a;
  }
  ScaledValue v;
  const double prefactor = derivative ? -0.5 / sa : 1.0;
  v.mantissa = prefactor * sum;
  v.noise = 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(order) * magnitude *
            std::abs(prefactor);
  v.log_scale = 0.5 * std::log(std::numbers::pi / a) - x * x;
  return v;
}

}  // namespace

ScaledValue eval_closed_form(const ZSpec& zs, std::complex<double> z) { return closed_form(zs, z, false); }

ScaledValue eval_closed_form_derivative(const ZSpec& zs, std::complex<double> z) {
  return closed_form(zs, z, true);
}

ZSeries::ZSeries(const ZSpec& zs, int k_max, const QuadratureConfig& qc) : k_max_(k_max - k_max % 2) {
  zs.validate();
  if (k_max_ < 2) throw Error(ErrorKind::domain_error, "k_max must be >= 2");
  const PrecisionConfig pc{PrecisionMode::extended, 1e-6};
  moments_ = even_weight_moments([&zs](double u) { return zs.weight(u); },
                                 [&zs](const ExtendedReal& u) { return zs.weight_extended(u); }, k_max_, qc, pc);
}

SeriesValue ZSeries::eval(std::complex<double> z) const {
  const ExtendedComplex zz(z);
  const ExtendedComplex minus_z2 = -(zz * zz);
  ExtendedComplex power(ExtendedReal(1.0));
  ExtendedComplex sum;
  SeriesValue out;
  double previous = 0.0;
  const int last = k_max_ / 2;
  for (int j = 0; j <= last; ++j) {
    const ExtendedComplex term = power * moments_.values_extended[2 * j];
    const double size = term.abs();
    if (j == last) {
      out.truncation_bound = size;
      if (size > previous && size > 0.0)
        throw Error(ErrorKind::series_divergence, "series terms still grow at k_max = " + std::to_string(k_max_));
      break;
    }
    sum += term;
    out.max_term = std::max(out.max_term, size);
    previous = size;
    ++out.terms;
    power = power * minus_z2 * (ExtendedReal(1.0) / ExtendedReal((2.0 * j + 1.0) * (2.0 * j + 2.0)));
  }
  out.value_extended = sum;
  out.value = sum.to_complex();
  return out;
}

SeriesValue eval_series(const ZSpec& zs, std::complex<double> z, int k_max, const QuadratureConfig& qc) {
  return ZSeries(zs, k_max, qc).eval(z);
}

namespace {

double round_digits(double x, int digits) {
  if (digits <= 0 || x == 0.0 || !std::isfinite(x)) return x;
  const int e = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const double scale = std::pow(10.0, digits - 1 - e);
  return std::round(x * scale) / scale;
}

// 0F2 at x >= 0 with every operation rounded to the given digits.
double hyper0f2_digits(double b1, double b2, double x, int digits) {
  double term = 1.0, sum = 1.0;
  int guard = 0;
  for (int n = 0; n < 100000; ++n) {
    term = round_digits(term * x / ((b1 + n) * (b2 + n) * (n + 1.0)), digits);
    sum = round_digits(sum + term, digits);
    if (std::abs(term) < std::pow(10.0, -digits - 1) * std::abs(sum) && ++guard >= 5) return sum;
  }
  throw Error(ErrorKind::non_convergence, "0F2 emulation did not converge");
}

}  // namespace

HypergeomValue gue_hypergeom_raw(double z, PrecisionMode mode, int significant_digits) {
  const double x = z * z * z * z / 256.0;
  HypergeomValue out;
  out.precision = mode;
  if (mode == PrecisionMode::extended) {
    const ExtendedReal g34 = gamma_extended(ExtendedReal(3.0) / 4.0);
    const ExtendedReal xe = (ExtendedReal(z) * z) * (ExtendedReal(z) * z) / 256.0;
    const ExtendedReal a = hyper0f2_extended(ExtendedReal(5.0) / 4.0, ExtendedReal(1.5), xe);
    const ExtendedReal b = hyper0f2_extended(ExtendedReal(0.5), ExtendedReal(3.0) / 4.0, xe);
    const ExtendedReal branch_b = xconst::sqrt2() * xconst::pi() * b / (g34 * 2.0);
    const ExtendedReal branch_a = ExtendedReal(z) * z * g34 * a / 4.0;
    out.value_extended = branch_b - branch_a;
    out.value = out.value_extended.to_double();
    out.branch = std::max(std::abs(branch_a.to_double()), std::abs(branch_b.to_double()));
  } else {
    const int d = significant_digits;
    const double g34 = round_digits(gamma_fn(0.75), d);
    const double a = d > 0 ? hyper0f2_digits(1.25, 1.5, round_digits(x, d), d) : hyper0f2(1.25, 1.5, x);
    const double b = d > 0 ? hyper0f2_digits(0.5, 0.75, round_digits(x, d), d) : hyper0f2(0.5, 0.75, x);
    const double branch_b = round_digits(round_digits(std::sqrt(2.0) * std::numbers::pi, d) * b / (2.0 * g34), d);
    const double branch_a = round_digits(round_digits(z * z * g34, d) * a / 4.0, d);
    out.value = round_digits(branch_b - branch_a, d);
    out.value_extended = ExtendedReal(out.value);
    out.branch = std::max(std::abs(branch_a), std::abs(branch_b));
  }
  out.cancellation_ratio = out.branch > 0.0 ? std::abs(out.value) / out.branch : 1.0;
  return out;
}

double gue_hypergeom_envelope(double z) {
  return gamma_fn(0.25) / 2.0 * std::exp(-0.375 * std::cbrt(0.25) * std::pow(std::abs(z), 4.0 / 3.0));
}

HypergeomValue eval_gue_hypergeom(double z, const PrecisionConfig& pc) {
  pc.validate();
  HypergeomValue r = gue_hypergeom_raw(z, pc.mode);
  if (pc.mode == PrecisionMode::native && r.cancellation_ratio < pc.escalate_threshold) {
    r = gue_hypergeom_raw(z, PrecisionMode::extended);
    r.escalated = true;
  }
  const double budget = 8.0 * unit_roundoff(r.precision) * r.branch;
  if (budget > 1e-6 * gue_hypergeom_envelope(z))
    throw Error(ErrorKind::precision_exhausted,
                "cancellation between the 0F2 branches (" + io::format_double(r.branch) +
                    ") exceeds the precision budget at z = " + io::format_double(z));
  return r;
}

HypergeomValue gue_z_via_hypergeom(double z, const PrecisionConfig& pc) {
  const double s = std::pow(2.0, 0.25);
  HypergeomValue r = eval_gue_hypergeom(s * z, pc);
  const ExtendedReal se = sqrt(sqrt(ExtendedReal(2.0)));
  r.value_extended = r.value_extended * se;
  r.value = r.value_extended.to_double();
  r.branch *= s;
  return r;
}

double second_difference_roughness(const std::vector<double>& values, double h) {
  if (values.size() < 3 || !(h > 0.0)) throw Error(ErrorKind::domain_error, "need 3+ samples and h > 0");
  double peak = 0.0, worst = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    worst = std::max(worst, std::abs(values[i + 1] - 2.0 * values[i] + values[i - 1]));
  return peak > 0.0 ? worst / (h * h * peak) : 0.0;
}

const char* to_string(ZRoute route) {
  switch (route) {
    case ZRoute::automatic: return "automatic";
    case ZRoute::quadrature: return "quadrature";
    case ZRoute::closed_form: return "closed_form";
  }
  return "automatic";
}

ZRoute resolve_route(const ZSpec& zs, ZRoute route) {
  if (route == ZRoute::automatic) return zs.has_closed_form() ? ZRoute::closed_form : ZRoute::quadrature;
  if (route == ZRoute::closed_form && !zs.has_closed_form())
    throw Error(ErrorKind::invalid_spec, "the closed-form route needs a RhoSpec with d = 0");
  return route;
}

AnalyticSampler make_sampler(const ZSpec& zs, const ZOptions& opts) {
  zs.validate();
  AnalyticSampler s;
  if (resolve_route(zs, opts.route) == ZRoute::closed_form) {
    s.value = [zs](std::complex<double> z) { return eval_closed_form(zs, z); };
    s.derivative = [zs](std::complex<double> z) { return eval_closed_form_derivative(zs, z); };
    return s;
  }
  const QuadratureConfig qc = opts.qc;
  const PrecisionConfig pc = opts.pc;
  s.value = [zs, qc, pc](std::complex<double> z) {
    const ZValue v = eval_quadrature(zs, z, qc, pc);
    return ScaledValue{v.value, {0.0, 0.0}, v.error};
  };
  s.derivative = [zs, qc, pc](std::complex<double> z) {
    const ZValue v = eval_derivative(zs, z, qc, pc);
    return ScaledValue{v.value, {0.0, 0.0}, v.error};
  };
  return s;
}

namespace {

std::string method_of(const ZSpec& zs, const ZOptions& opts) {
  std::ostringstream os;
  const ZRoute route = resolve_route(zs, opts.route);
  os << "route=" << to_string(route);
  if (route == ZRoute::quadrature) {
    os << " precision=" << to_string(opts.pc.mode) << " escalate_threshold=" << opts.pc.escalate_threshold
       << " panel_order=" << opts.qc.panel_order << " abs_tol=" << opts.qc.abs_tol << " rel_tol=" << opts.qc.rel_tol;
  }
  return os.str();
}

}  // namespace

ZeroTable find_real_zeros(const ZSpec& zs, double z_max, const ZOptions& opts) {
  ZeroTable t = find_real_zeros(make_sampler(zs, opts), z_max, opts.scan);
  t.b = zs.b;
  t.method = method_of(zs, opts);
  return t;
}

RectCount count_zeros_rect(const ZSpec& zs, const Rect& rect, const ZOptions& opts) {
  return count_zeros_in_rect(make_sampler(zs, opts), rect, opts.contour);
}

RealityReport verify_reality(const ZSpec& zs, double z_max, double height, const ZOptions& opts) {
  RealityReport r = verify_reality(make_sampler(zs, opts), z_max, height, opts.scan, opts.contour);
  r.table.b = zs.b;
  r.table.method = method_of(zs, opts);
  return r;
}

FlowResult flow_zeros(const ZSpec& zs, const std::vector<double>& b_grid, double z_max, const ZOptions& opts) {
  FlowResult f = flow_zeros([&](double b) { return make_sampler(zs.with_b(b), opts); }, b_grid, z_max, opts.scan);
  for (auto& t : f.tables) t.method = method_of(zs, opts);
  return f;
}

}  // namespace pfz
