#include "pfz/xi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfz/errors.hpp"
#include "pfz/io.hpp"
#include "pfz/numerics/special.hpp"

namespace pfz {

namespace {

constexpr int kTermCap = 100000;

ZOptions options_of(const XiConfig& cfg) {
  ZOptions o;
  o.route = ZRoute::quadrature;
  o.qc = cfg.qc;
  o.pc = cfg.pc;
  o.scan = cfg.scan;
  o.contour = cfg.contour;
  return o;
}

void check_floor(double u) {
  if (!(u >= kXiFloor))
    throw Error(ErrorKind::truncation_cap_exceeded,
                "F is evaluated directly only for u >= -3 (got " + io::format_double(u) + ")");
}

}  // namespace

void XiConfig::validate() const {
  if (!(term_tail_tol > 0.0)) throw Error(ErrorKind::invalid_spec, "term_tail_tol must be positive");
  if (!(u_max > 0.0)) throw Error(ErrorKind::invalid_spec, "u_max must be positive");
  qc.validate();
  pc.validate();
}

double F_eval(double u, const XiConfig& cfg) {
  check_floor(u);
  const double pi = std::numbers::pi;
  const double e2 = std::exp(2.0 * u);
  const double a = 4.0 * pi * pi * std::exp(4.5 * u);
  const double c = 6.0 * pi * std::exp(2.5 * u);
  double sum = 0.0;
  for (int n = 1; n <= kTermCap; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const double g = std::exp(-n2 * pi * e2);
    sum += (a * n2 * n2 - c * n2) * g;
    // n^4 e^{-n^2 x} decreases once n^2 x > 2.
    if (n2 * pi * e2 > 2.0 && a * n2 * n2 * g < cfg.term_tail_tol) return sum;
  }
  throw Error(ErrorKind::truncation_cap_exceeded,
              "F series needs more than " + std::to_string(kTermCap) + " terms at u = " + io::format_double(u));
}

double F_noise_scale(double u, const XiConfig& cfg) {
  check_floor(u);
  const double pi = std::numbers::pi;
  const double e2 = std::exp(2.0 * u);
  const double a = 4.0 * pi * pi * std::exp(4.5 * u);
  const double c = 6.0 * pi * std::exp(2.5 * u);
  double sum = 0.0;
  for (int n = 1; n <= kTermCap; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const double g = std::exp(-n2 * pi * e2);
    sum += (a * n2 * n2 + c * n2) * g;
    if (n2 * pi * e2 > 2.0 && a * n2 * n2 * g < cfg.term_tail_tol) return sum;
  }
  return sum;
}

ExtendedReal F_eval_extended(const ExtendedReal& u, const XiConfig& cfg) {
  check_floor(u.to_double());
  const ExtendedReal pi = xconst::pi();
  const ExtendedReal e2 = exp(u * 2.0);
  const ExtendedReal a = pi * pi * exp(u * 4.5) * 4.0;
  const ExtendedReal c = pi * exp(u * 2.5) * 6.0;
  const double tol = cfg.term_tail_tol * 1e-16;
  ExtendedReal sum(0.0);
  for (int n = 1; n <= kTermCap; ++n) {
    const double n2 = static_cast<double>(n) * n;
    const ExtendedReal x = pi * e2 * n2;
    const ExtendedReal g = exp(-x);
    sum += (a * (n2 * n2) - c * n2) * g;
    if (x.to_double() > 2.0 && (a * (n2 * n2) * g).to_double() < tol) return sum;
  }
  throw Error(ErrorKind::truncation_cap_exceeded,
              "F series needs more than " + std::to_string(kTermCap) + " terms at u = " + io::format_double(u.to_double()));
}

ZSpec xi_spec(double b, const XiConfig& cfg) {
  cfg.validate();
  CustomDensity f;
  f.name = "riemann_F";
  f.value = [cfg](double u) { return F_eval(u, cfg); };
  f.value_extended = [cfg](const ExtendedReal& u) { return F_eval_extended(u, cfg); };
  f.noise_scale = [cfg](double u) { return F_noise_scale(u, cfg); };
  f.support_radius = std::min(cfg.u_max, -kXiFloor);
  return {f, b};
}

ZValue xi_eval(std::complex<double> z, double b, const XiConfig& cfg) {
  return eval_quadrature(xi_spec(b, cfg), z, cfg.qc, cfg.pc);
}

std::complex<double> zeta_eta(std::complex<double> s, int terms) {
  if (!(s.real() > 0.0)) throw Error(ErrorKind::domain_error, "the eta series needs Re s > 0");
  if (std::abs(s - 1.0) < 1e-12) throw Error(ErrorKind::domain_error, "zeta has a pole at s = 1");
  if (terms < 1) throw Error(ErrorKind::domain_error, "terms must be >= 1");
  // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), built from term ratios.
  const int n = terms;
  std::vector<double> d(n + 1);
  double term = 1.0 / n, acc = term;
  d[0] = n * acc;
  for (int i = 1; i <= n; ++i) {
    term *= 4.0 * (n + i - 1.0) * (n - i + 1.0) / ((2.0 * i) * (2.0 * i - 1.0));
    acc += term;
    d[i] = n * acc;
  }
  std::complex<double> sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double sign = k % 2 ? -1.0 : 1.0;
    sum += sign * ((d[k] - d[n]) / d[n]) * std::exp(-s * std::log(k + 1.0));
  }
  const std::complex<double> eta = -sum;
  return eta / (1.0 - std::exp((1.0 - s) * std::numbers::ln2));
}

std::complex<double> zeta_critical_line(double t) {
  if (!(std::abs(t) <= 60.0))
    throw Error(ErrorKind::range_exceeded, "the zeta oracle covers |t| <= 60 (got " + io::format_double(t) + ")");
  return zeta_eta({0.5, t});
}

double xi_from_gamma_zeta(double z) {
  const std::complex<double> s(0.5, z);
  const std::complex<double> log_factor = -0.5 * s * std::log(std::numbers::pi) + log_gamma(0.5 * s);
  return (0.5 * s * (s - 1.0) * std::exp(log_factor) * zeta_critical_line(z)).real();
}

double xi_normalization_ratio(double z, const XiConfig& cfg) {
  return xi_eval(z, 0.0, cfg).value.real() / (2.0 * xi_from_gamma_zeta(z));
}

double xi_oracle_zero(double lo, double hi) {
  double flo = xi_from_gamma_zeta(lo);
  const double fhi = xi_from_gamma_zeta(hi);
  if (!(flo * fhi < 0.0)) throw Error(ErrorKind::domain_error, "no sign change of the oracle xi in the bracket");
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = xi_from_gamma_zeta(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ZeroTable xi_zeros(double z_max, const XiConfig& cfg) {
  if (!(z_max > 0.0 && z_max <= 50.0)) throw Error(ErrorKind::domain_error, "xi_zeros needs 0 < z_max <= 50");
  return find_real_zeros(xi_spec(0.0, cfg), z_max, options_of(cfg));
}

RectCount xi_count_rect(const Rect& rect, const XiConfig& cfg) {
  return count_zeros_rect(xi_spec(0.0, cfg), rect, options_of(cfg));
}

FlowResult xi_flow(const std::vector<double>& b_grid, double z_max, const XiConfig& cfg) {
  if (!(z_max > 0.0 && z_max <= 50.0)) throw Error(ErrorKind::domain_error, "xi_flow needs 0 < z_max <= 50");
  return flow_zeros(xi_spec(0.0, cfg), b_grid, z_max, options_of(cfg));
}

}  // namespace pfz
