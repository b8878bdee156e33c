#pragma once

// Gaussian-deformed Fourier transforms
//
//   Z_b(z) = integral e^{izu - bu^2} d rho(u)
//
// of even densities, by quadrature, by the moment series, in closed form
// (d = 0 Newman measures, through Hermite polynomials) and, for the GUE
// density e^{-u^4/2}, through 0F2 hypergeometric functions. Zero finding,
// argument-principle counting and b-flow wrappers sit on top of zeros.hpp.

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "pfz/numerics/extended_real.hpp"
#include "pfz/numerics/quadrature.hpp"
#include "pfz/rho.hpp"
#include "pfz/zeros.hpp"

namespace pfz {

/// An even density supplied by the caller.
struct CustomDensity {
  std::string name;
  std::function<double(double)> value;
  /// Optional double-double evaluator.
  std::function<ExtendedReal(const ExtendedReal&)> value_extended;
  /// Optional bound for |value(u)|, used for automatic truncation.
  std::function<double(double)> envelope;
  /// Optional roundoff scale of value(u) in units of the unit roundoff
  /// (the sum of |terms| for a cancelling series).
  std::function<double(double)> noise_scale;
  /// The density is treated as zero for |u| beyond this radius.
  double support_radius = std::numeric_limits<double>::infinity();
};

struct ZSpec {
  std::variant<RhoSpec, CustomDensity> source;
  double b = 0.0;

  /// Throws Error(invalid_spec) for b < 0, an invalid RhoSpec, or a custom
  /// density failing the evenness spot check (1e-12 of max(|density(0)|, |density(+-u)|)).
  void validate() const;
  /// True for RhoSpecs with d = 0, whose transform is Gaussian times a
  /// polynomial.
  bool has_closed_form() const;
  ZSpec with_b(double new_b) const;
  std::string describe() const;

  /// density(u) * e^{-b u^2}.
  double weight(double u) const;
  ExtendedReal weight_extended(const ExtendedReal& u) const;
  double support_radius() const;
  /// Roundoff scale of weight(u) when the custom density declares one.
  double weight_noise(double u) const;
  bool has_noise_model() const;
};

struct ZValue {
  std::complex<double> value;
  ExtendedComplex value_extended;
  double error = 0.0;
  double abs_integral = 0.0;
  double cancellation_ratio = 1.0;
  bool escalated = false;
  PrecisionMode precision = PrecisionMode::native;
};

/// Z_b(z) by adaptive quadrature along real u. For real z the imaginary part
/// is checked against 1e-10 * integral |f| and then set to zero.
ZValue eval_quadrature(const ZSpec& zs, std::complex<double> z, const QuadratureConfig& qc = {},
                       const PrecisionConfig& pc = {});

/// Z_b'(z) = integral i u e^{izu - bu^2} d rho(u).
ZValue eval_derivative(const ZSpec& zs, std::complex<double> z, const QuadratureConfig& qc = {},
                       const PrecisionConfig& pc = {});

/// Exact Z_b and Z_b' for d = 0 RhoSpecs:
///   Z = sqrt(pi/a) e^{-x^2} sum_k c_k a^{-k} (-1/4)^k H_{2k}(x),
/// with a = omega + sum d_j + b, x = z / (2 sqrt a) and c_k the coefficients
/// of u^{2m} prod (1 + d_j u^2) in powers of u^2. Throws Error(domain_error)
/// when has_closed_form() is false.
ScaledValue eval_closed_form(const ZSpec& zs, std::complex<double> z);
ScaledValue eval_closed_form_derivative(const ZSpec& zs, std::complex<double> z);

struct SeriesValue {
  std::complex<double> value;
  ExtendedComplex value_extended;
  /// Magnitude of the first omitted term.
  double truncation_bound = 0.0;
  double max_term = 0.0;
  int terms = 0;
};

/// Taylor series sum_k (iz)^k m_k / k! from double-double moments computed
/// once at construction.
class ZSeries {
 public:
  ZSeries(const ZSpec& zs, int k_max, const QuadratureConfig& qc = {});

  /// Throws Error(series_divergence) if the terms still grow at k_max.
  SeriesValue eval(std::complex<double> z) const;
  const MomentTable& moments() const { return moments_; }
  int k_max() const { return k_max_; }

 private:
  MomentTable moments_;
  int k_max_;
};

SeriesValue eval_series(const ZSpec& zs, std::complex<double> z, int k_max, const QuadratureConfig& qc = {});

struct HypergeomValue {
  double value = 0.0;
  ExtendedReal value_extended;
  /// Magnitude of the larger of the two cancelling branches.
  double branch = 0.0;
  /// |value| / branch.
  double cancellation_ratio = 1.0;
  bool escalated = false;
  PrecisionMode precision = PrecisionMode::native;
};

/// The transform of e^{-v^4},
///   H(z) = sqrt(2) pi 0F2(;1/2,3/4;z^4/256) / (2 Gamma(3/4))
///          - z^2 Gamma(3/4) 0F2(;5/4,3/2;z^4/256) / 4,
/// evaluated in the given precision without any checks. significant_digits
/// > 0 rounds every series term, partial sum and the final combination to
/// that many decimal digits (an emulation of lower-precision arithmetic).
HypergeomValue gue_hypergeom_raw(double z, PrecisionMode mode, int significant_digits = 0);

/// H(z) with escalation to double-double on cancellation. Throws
/// Error(precision_exhausted) when 8 u * branch exceeds 1e-6 of the
/// expected magnitude gue_hypergeom_envelope(z).
HypergeomValue eval_gue_hypergeom(double z, const PrecisionConfig& pc = {});

/// Saddle-point size of H: Gamma(1/4)/2 * exp(-(3/8) 4^{-1/3} z^{4/3}).
double gue_hypergeom_envelope(double z);

/// Z_0 of the GUE density e^{-u^4/2} through the scaling
/// Z_0(z) = 2^{1/4} H(2^{1/4} z).
HypergeomValue gue_z_via_hypergeom(double z, const PrecisionConfig& pc = {});

/// max |second difference| / (h^2 max |v|) of equally spaced samples.
double second_difference_roughness(const std::vector<double>& values, double h);

enum class ZRoute { automatic, quadrature, closed_form };

const char* to_string(ZRoute route);

struct ZOptions {
  ZRoute route = ZRoute::automatic;
  QuadratureConfig qc;
  PrecisionConfig pc;
  ScanOptions scan;
  ContourOptions contour;
};

/// Value and derivative sampler for the zero machinery. automatic selects
/// the closed form when available and quadrature otherwise.
AnalyticSampler make_sampler(const ZSpec& zs, const ZOptions& opts = {});
ZRoute resolve_route(const ZSpec& zs, ZRoute route);

ZeroTable find_real_zeros(const ZSpec& zs, double z_max, const ZOptions& opts = {});
RectCount count_zeros_rect(const ZSpec& zs, const Rect& rect, const ZOptions& opts = {});
RealityReport verify_reality(const ZSpec& zs, double z_max, double height, const ZOptions& opts = {});
FlowResult flow_zeros(const ZSpec& zs, const std::vector<double>& b_grid, double z_max, const ZOptions& opts = {});

}  // namespace pfz
