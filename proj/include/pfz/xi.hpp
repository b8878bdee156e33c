#pragma once

// Riemann xi through the theta-series kernel
//
//   F(u) = sum_{n>=1} (4 n^4 pi^2 e^{9u/2} - 6 n^2 pi e^{5u/2}) exp(-n^2 pi e^{2u}),
//
// its Gaussian deformation xi_b(z) = integral e^{izu - bu^2} F(u) du, and an
// independent zeta oracle on the critical line (Borwein's accelerated eta
// series) used to cross-check values and zeros.

#include <complex>
#include <vector>

#include "pfz/numerics/extended_real.hpp"
#include "pfz/ztransform.hpp"

namespace pfz {

struct XiConfig {
  /// The F series stops once the term bound 4 n^4 pi^2 e^{9u/2} e^{-n^2 pi e^{2u}}
  /// falls below this (past the peak term).
  double term_tail_tol = 1e-20;
  /// Integration cutoff; F(3) is about e^{-1260}, so 3 loses nothing.
  double u_max = 3.0;
  QuadratureConfig qc;
  PrecisionConfig pc;
  ScanOptions scan;
  ContourOptions contour;

  void validate() const;
};

/// Lowest u where F is evaluated directly (the series needs ~e^{-u} terms).
inline constexpr double kXiFloor = -3.0;

/// F(u) summed directly for either sign of u. Throws
/// Error(truncation_cap_exceeded) for u < -3 or when the term cap binds.
double F_eval(double u, const XiConfig& cfg = {});
ExtendedReal F_eval_extended(const ExtendedReal& u, const XiConfig& cfg = {});
/// Sum of |terms| of the F series: the scale of its roundoff.
double F_noise_scale(double u, const XiConfig& cfg = {});

/// F as a custom density on [-min(u_max, 3), u_max] for the transform machinery.
ZSpec xi_spec(double b, const XiConfig& cfg = {});

/// xi_b(z) by quadrature over the real u line, without assuming evenness.
ZValue xi_eval(std::complex<double> z, double b, const XiConfig& cfg = {});

/// eta-series zeta on Re s > 0 (s != 1), Borwein's algorithm with n terms.
std::complex<double> zeta_eta(std::complex<double> s, int terms = 80);

/// zeta(1/2 + it); throws Error(range_exceeded) for |t| > 60.
std::complex<double> zeta_critical_line(double t);

/// s (s - 1) pi^{-s/2} Gamma(s/2) zeta(s) / 2 at s = 1/2 + iz for real z
/// (the value is real there).
double xi_from_gamma_zeta(double z);

/// xi_eval(z) / (2 xi_from_gamma_zeta(z)).
double xi_normalization_ratio(double z, const XiConfig& cfg = {});

/// Zero of the oracle xi in [lo, hi] by bisection on its sign; throws
/// Error(domain_error) without a sign change.
double xi_oracle_zero(double lo, double hi);

/// Real zeros of xi_0 on [0, z_max], z_max <= 50.
ZeroTable xi_zeros(double z_max, const XiConfig& cfg = {});
RectCount xi_count_rect(const Rect& rect, const XiConfig& cfg = {});
FlowResult xi_flow(const std::vector<double>& b_grid, double z_max, const XiConfig& cfg = {});

}  // namespace pfz
