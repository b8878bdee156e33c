#pragma once

// Characteristic functions of Schoenberg's class
//
//   p(t) = e^{i omega t} e^{-d t^2} prod_j e^{i d_j t} / (1 + i d_j t),
//
// with omega real, d >= 0 and a finite list of nonzero d_j.

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace pfz {

class SchoenbergParams {
 public:
  SchoenbergParams() = default;
  /// Validates (d >= 0, finite nonzero coefficients) and sorts the
  /// coefficients into canonical order: decreasing |d_j|, positive first
  /// on ties. Throws Error(invalid_spec).
  SchoenbergParams(double omega, double d, std::vector<double> coeffs);

  /// p(t) = e^{-t^2/2}, the GUE entry law.
  static SchoenbergParams gue() { return {0.0, 0.5, {}}; }

  double omega() const { return omega_; }
  double d() const { return d_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff_sum() const;

  /// Parameters of the pointwise product of the two characteristic functions.
  SchoenbergParams combined_with(const SchoenbergParams& other) const;

  friend bool operator==(const SchoenbergParams&, const SchoenbergParams&) = default;

 private:
  double omega_ = 0.0;
  double d_ = 0.0;
  std::vector<double> coeffs_;
};

struct ValidationReport {
  bool rho_nonnegative = true;
  bool rho_finite = true;
  std::vector<std::string> notes;
};

/// Evaluates p(t). pole_eps defaults to 1e-8 * max(1, |t|); throws
/// PoleProximityError when t is that close to a pole i/d_j.
std::complex<double> eval_p(const SchoenbergParams& params, std::complex<double> t,
                            std::optional<double> pole_eps = std::nullopt);

/// The poles i/d_j, sorted by |imaginary part|.
std::vector<std::complex<double>> poles(const SchoenbergParams& params);

ValidationReport validate(const SchoenbergParams& params);

}  // namespace pfz
