#pragma once

// Newman measures d rho(u) = u^{2m} / p(-i u^2) du built from Schoenberg
// parameters:
//
//   1 / p(-i u^2) = e^{-omega u^2 - d u^4} prod_j (1 + d_j u^2) e^{-d_j u^2}.

#include <functional>
#include <vector>

#include "pfz/numerics/extended_real.hpp"
#include "pfz/numerics/quadrature.hpp"
#include "pfz/schoenberg.hpp"

namespace pfz {

struct RhoSpec {
  SchoenbergParams params;
  int m = 0;

  /// Throws Error(invalid_spec) unless every d_j >= 0, m >= 0 and the
  /// measure is finite (d > 0 or omega + sum d_j > 0).
  void validate() const;

  static RhoSpec gue() { return {SchoenbergParams::gue(), 0}; }

  friend bool operator==(const RhoSpec&, const RhoSpec&) = default;
};

/// Density of rho at u, evaluated in product form (log space when the
/// exponent leaves the safe range). Exactly even in u.
double density(const RhoSpec& spec, double u);
ExtendedReal density_extended(const RhoSpec& spec, const ExtendedReal& u);

/// Integral of the density over the real line.
QuadratureResult total_mass(const RhoSpec& spec, const QuadratureConfig& qc = {},
                            const PrecisionConfig& pc = {});

struct MomentTable {
  /// m_k = integral of u^k e^{-b u^2} d rho(u), k = 0..k_max; odd entries are 0.
  std::vector<double> values;
  std::vector<ExtendedReal> values_extended;
  std::vector<double> errors;
  /// Indices k (even) where m_{k+2} m_{k-2} < m_k^2 beyond tolerance.
  std::vector<int> log_convexity_violations;
};

MomentTable moments(const RhoSpec& spec, double b, int k_max, const QuadratureConfig& qc = {},
                    const PrecisionConfig& pc = {});

/// Even moments of an arbitrary even weight: 2 * integral_0^inf u^k w(u) du
/// for even k; shared by the series evaluator for custom densities.
MomentTable even_weight_moments(const std::function<double(double)>& weight,
                                const std::function<ExtendedReal(const ExtendedReal&)>& weight_extended,
                                int k_max, const QuadratureConfig& qc, const PrecisionConfig& pc);

}  // namespace pfz
