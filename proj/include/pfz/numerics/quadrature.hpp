#pragma once

// Adaptive composite Gauss-Legendre integration with optional double-double
// evaluation. Each panel is integrated with orders n and 2n; their difference
// is the panel error estimate and the 2n value is kept.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "pfz/numerics/extended_real.hpp"

namespace pfz {

enum class PrecisionMode { native, extended };

const char* to_string(PrecisionMode mode);

/// Unit roundoff of each mode.
double unit_roundoff(PrecisionMode mode);

struct PrecisionConfig {
  PrecisionMode mode = PrecisionMode::native;
  /// Native results whose |value| / integral of |f| falls below this are
  /// recomputed in extended precision.
  double escalate_threshold = 1e-6;

  void validate() const;
};

struct QuadratureConfig {
  /// Symmetric truncation radius for infinite limits; empty means automatic.
  std::optional<double> truncation_radius;
  int panel_order = 10;
  int max_refinements = 40;
  double abs_tol = 1e-15;
  double rel_tol = 1e-13;

  void validate() const;
};

struct Integrand {
  std::function<std::complex<double>(double)> value;
  /// Optional double-double evaluator used in extended mode.
  std::function<ExtendedComplex(const ExtendedReal&)> value_extended;
  /// Optional upper bound for |value(u)|, used for automatic truncation.
  std::function<double(double)> envelope;
  /// Angular frequency of an oscillating factor e^{i k u}; panels are kept
  /// no wider than pi / (2k).
  double frequency = 0.0;
  /// Optional roundoff scale of a sample, in units of the working unit
  /// roundoff (for a cancelling series, the sum of |terms|). Panels whose
  /// error is below 16 u times the integral of max(|value|, noise) are at
  /// the noise floor and accepted.
  std::function<double(double)> noise;
};

struct QuadratureResult {
  std::complex<double> value;
  ExtendedComplex value_extended;
  double error = 0.0;
  double abs_integral = 0.0;
  double cancellation_ratio = 1.0;
  bool escalated = false;
  PrecisionMode precision = PrecisionMode::native;
  double lower = 0.0;
  double upper = 0.0;
  int panels = 0;
  long evaluations = 0;
  /// Panels accepted because refinement stopped reducing their error.
  int noise_limited_panels = 0;
};

/// Integrates f over [a, b]; either limit may be infinite when the
/// truncation radius is automatic or given. Throws Error(non_convergence)
/// or Error(non_finite).
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureConfig& qc = {},
                                    const PrecisionConfig& pc = {});

/// Real-valued convenience overload.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& qc = {},
                                    const PrecisionConfig& pc = {});

/// Smallest radius U (from a geometric probe) with envelope(u) * max(|u|, 1)
/// below tol / 10 and not increasing at two consecutive probes, on the side
/// given by sign.
double auto_truncation(const std::function<double(double)>& envelope, double sign, double tol);

struct GaussRule {
  std::vector<ExtendedReal> nodes;
  std::vector<ExtendedReal> weights;
  std::vector<double> nodes_native;
  std::vector<double> weights_native;
};

/// Gauss-Legendre rule on [-1, 1], computed once per order in double-double.
const GaussRule& gauss_legendre(int order);

constexpr int kMaxGaussOrder = 128;

}  // namespace pfz
