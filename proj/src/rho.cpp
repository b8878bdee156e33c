#include "pfz/rho.hpp"

#include <cmath>
#include <limits>

#include "pfz/errors.hpp"

namespace pfz {

void RhoSpec::validate() const {
  if (m < 0) throw Error(ErrorKind::invalid_spec, "m must be >= 0");
  for (double c : params.coeffs())
    if (c < 0.0) throw Error(ErrorKind::invalid_spec, "rho requires every d_j >= 0");
  if (!(params.d() > 0.0 || params.omega() + params.coeff_sum() > 0.0))
    throw Error(ErrorKind::invalid_spec, "rho is not finite: need d > 0 or omega + sum d_j > 0");
}

namespace {

// Exponent beyond which the product is assembled in log space.
constexpr double kSafeExponent = 600.0;

double quadratic_rate(const RhoSpec& spec) { return spec.params.omega() + spec.params.coeff_sum(); }

}  // namespace

double density(const RhoSpec& spec, double u) {
  const double u2 = u * u;
  const double exponent = -quadratic_rate(spec) * u2 - spec.params.d() * u2 * u2;
  if (std::abs(exponent) < kSafeExponent) {
    double prod = std::exp(exponent);
    for (double dj : spec.params.coeffs()) prod *= 1.0 + dj * u2;
    for (int k = 0; k < spec.m; ++k) prod *= u2;
    return prod;
  }
  if (u2 == 0.0) return spec.m == 0 ? 1.0 : 0.0;
  double log_value = exponent + spec.m * std::log(u2);
  for (double dj : spec.params.coeffs()) log_value += std::log1p(dj * u2);
  return std::exp(log_value);
}

ExtendedReal density_extended(const RhoSpec& spec, const ExtendedReal& u) {
  const ExtendedReal u2 = u * u;
  const ExtendedReal exponent = -(u2 * quadratic_rate(spec)) - u2 * u2 * spec.params.d();
  ExtendedReal prod = exp(exponent);
  for (double dj : spec.params.coeffs()) prod *= u2 * dj + 1.0;
  for (int k = 0; k < spec.m; ++k) prod *= u2;
  return prod;
}

QuadratureResult total_mass(const RhoSpec& spec, const QuadratureConfig& qc, const PrecisionConfig& pc) {
  spec.validate();
  Integrand f;
  f.value = [&spec](double u) { return std::complex<double>(density(spec, u), 0.0); };
  f.value_extended = [&spec](const ExtendedReal& u) { return ExtendedComplex(density_extended(spec, u)); };
  f.envelope = [&spec](double u) { return density(spec, u); };
  const double inf = std::numeric_limits<double>::infinity();
  return integrate_adaptive(f, -inf, inf, qc, pc);
}

MomentTable even_weight_moments(const std::function<double(double)>& weight,
                                const std::function<ExtendedReal(const ExtendedReal&)>& weight_extended,
                                int k_max, const QuadratureConfig& qc, const PrecisionConfig& pc) {
  if (k_max < 0) throw Error(ErrorKind::domain_error, "k_max must be >= 0");
  MomentTable t;
  t.values.assign(k_max + 1, 0.0);
  t.values_extended.assign(k_max + 1, ExtendedReal(0.0));
  t.errors.assign(k_max + 1, 0.0);
  const double inf = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= k_max; k += 2) {
    Integrand f;
    // An underflowed weight wins over an overflowing power.
    const auto native = [&weight, k](double u) {
      const double w = weight(u);
      return w == 0.0 ? 0.0 : std::pow(std::abs(u), k) * w;
    };
    f.value = [native](double u) { return std::complex<double>(native(u), 0.0); };
    if (weight_extended) {
      f.value_extended = [&weight_extended, k](const ExtendedReal& u) {
        const ExtendedReal w = weight_extended(u);
        return ExtendedComplex(w.hi() == 0.0 ? ExtendedReal(0.0) : pow(u, k) * w);
      };
    }
    f.envelope = native;
    // The tolerance is relative for high moments, whose size varies wildly.
    QuadratureConfig local = qc;
    if (k > 0) local.abs_tol = std::max(qc.abs_tol, qc.rel_tol * 1e-3 * t.values[k - 2]);
    const QuadratureResult r = integrate_adaptive(f, 0.0, inf, local, pc);
    t.values_extended[k] = r.value_extended.re * 2.0;
    t.values[k] = t.values_extended[k].to_double();
    t.errors[k] = 2.0 * r.error;
  }
  for (int k = 2; k + 2 <= k_max; k += 2) {
    const double lhs = std::log(t.values[k + 2]) + std::log(t.values[k - 2]);
    const double rhs = 2.0 * std::log(t.values[k]);
    if (lhs < rhs - 1e-10) t.log_convexity_violations.push_back(k);
  }
  return t;
}

MomentTable moments(const RhoSpec& spec, double b, int k_max, const QuadratureConfig& qc,
                    const PrecisionConfig& pc) {
  spec.validate();
  if (b < 0.0) throw Error(ErrorKind::domain_error, "b must be >= 0");
  const auto w = [&spec, b](double u) { return density(spec, u) * std::exp(-b * u * u); };
  const auto w_ext = [&spec, b](const ExtendedReal& u) {
    return density_extended(spec, u) * exp(-(u * u) * b);
  };
  return even_weight_moments(w, w_ext, k_max, qc, pc);
}

}  // namespace pfz
