#pragma once

// Polya frequency densities f with characteristic function p, and total
// positivity checks through kernel minors det[f(x_i - y_j)] and derivative
// minors det[f^{(i-1)}(omega_j)].

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pfz/numerics/extended_real.hpp"
#include "pfz/numerics/quadrature.hpp"
#include "pfz/schoenberg.hpp"

namespace pfz {

/// A density evaluator. The extended evaluator is optional; without it the
/// native one is promoted.
struct DensitySource {
  std::string name;
  std::function<double(double)> value;
  std::function<ExtendedReal(const ExtendedReal&)> value_extended;

  ExtendedReal eval_extended(const ExtendedReal& a) const;
};

/// f from Schoenberg parameters: eval_f in native mode and extended mode.
DensitySource schoenberg_source(const SchoenbergParams& params, const QuadratureConfig& qc = {});

DensitySource closed_form_source(std::string name, std::function<double(double)> value,
                                 std::function<ExtendedReal(const ExtendedReal&)> value_extended = {});

/// Piecewise Lagrange interpolation of the given degree on a strictly
/// increasing grid, using the degree + 1 nodes nearest to the point; zero
/// outside [xs.front(), xs.back()]. Throws Error(invalid_spec).
DensitySource tabulated_source(std::vector<double> xs, std::vector<double> ys, int degree = 3);

/// Two-column CSV (abscissa, value) with a header row.
DensitySource tabulated_source_from_csv(const std::string& path, int degree = 3);

/// The bimodal mixture (g(a - shift) + g(a + shift)) / 2 of standard
/// Gaussians; not a Polya frequency function for shift >= 1.
DensitySource bimodal_control_source(double shift = 3.0);

/// f(a) = (1/2pi) integral e^{-ita} p(t) dt. Uses the exact closed form when
/// d = 0 and quadrature along the real t axis otherwise. Throws
/// Error(non_integrable_transform) for the point mass (d = 0, no coefficients).
double eval_f(const SchoenbergParams& params, double a, const QuadratureConfig& qc = {},
              const PrecisionConfig& pc = {});
ExtendedReal eval_f_extended(const SchoenbergParams& params, const ExtendedReal& a,
                             const QuadratureConfig& qc = {});

/// The inversion integral alone. Throws Error(non_integrable_transform)
/// when d = 0 and there are fewer than two coefficients.
QuadratureResult eval_f_quadrature(const SchoenbergParams& params, double a, const QuadratureConfig& qc = {},
                                   const PrecisionConfig& pc = {});

/// Exact f for d = 0: the law of omega + sum_j d_j (1 - E_j) with E_j
/// independent standard exponentials, by partial fractions (repeated d_j
/// give Gamma components). Requires d = 0 and at least one coefficient.
template <class Real>
Real eval_f_closed_form(const SchoenbergParams& params, const Real& a);

struct TPOrderReport {
  int order = 0;
  double min_minor = 0.0;
  double tol = 0.0;
  bool violation = false;
  bool sampled = false;
  long minors_evaluated = 0;
  std::vector<double> min_rows;
  std::vector<double> min_cols;
};

struct TPReport {
  int max_order_checked = 0;
  double min_minor = 0.0;
  /// Row and column abscissae of the minor achieving the overall minimum.
  std::vector<double> min_rows;
  std::vector<double> min_cols;
  bool violation = false;
  std::uint64_t seed = 0;
  /// Estimated differentiation error (derivative minors only).
  double differentiation_error = 0.0;
  std::vector<TPOrderReport> orders;
};

struct MinorCheckOptions {
  /// Negative means the default 1e-9 * (max |K|)^n per order.
  double tol = -1.0;
  std::uint64_t seed = 0x5eed;
  long exhaustive_limit = 100000;
  long sample_count = 20000;
};

/// Minors det[f(x_i - y_j)] of orders 1..max_order over ordered sub-grids.
/// Throws Error(grid_too_small) when a grid is not strictly increasing or
/// shorter than max_order, or max_order is outside 1..5.
TPReport check_pf_minors(const DensitySource& src, const std::vector<double>& xs, const std::vector<double>& ys,
                         int max_order, const MinorCheckOptions& opts = {});

/// Leading minors det[f^{(i-1)}(omega_j)], k = 1..n, with derivatives from
/// central differences of step h (h <= 0 selects 1e-3 (1 + max |omega_j|)).
/// Throws Error(grid_too_small) or Error(non_smooth_point).
TPReport check_derivative_minors(const DensitySource& src, const std::vector<double>& omegas, int n,
                                 double h = -1.0, double tol = -1.0);

/// Central-difference derivative of order k (0..3), O(h^2), in extended
/// precision; error_estimate receives the Richardson estimate.
ExtendedReal central_derivative(const DensitySource& src, double a, int k, double h,
                                double* error_estimate = nullptr);

/// Determinant by Gaussian elimination with partial pivoting.
ExtendedReal determinant(std::vector<std::vector<ExtendedReal>> m);

}  // namespace pfz
