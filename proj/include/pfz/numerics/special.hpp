#pragma once

#include <complex>

#include "pfz/numerics/extended_real.hpp"

namespace pfz {

/// Gamma function for x > 0 (Lanczos, g = 7). Throws Error(domain_error)
/// for x <= 0.
double gamma_fn(double x);

/// log Gamma(z) for complex z off the non-positive integers, principal
/// branch continued along the right half plane.
std::complex<double> log_gamma(std::complex<double> z);

/// Gamma(x) for x > 0 to double-double accuracy (shifted Stirling series).
ExtendedReal gamma_extended(const ExtendedReal& x);

/// 0F2(; b1, b2; x), summed until |term| < 1e-17 |sum| plus five guard
/// terms. Alternating series (x < 0) are accumulated in double-double.
double hyper0f2(double b1, double b2, double x);

/// Double-double 0F2 with the same stopping rule at 1e-33. Reports the
/// largest term magnitude through max_term when non-null.
ExtendedReal hyper0f2_extended(const ExtendedReal& b1, const ExtendedReal& b2,
                               const ExtendedReal& x, double* max_term = nullptr);

}  // namespace pfz
