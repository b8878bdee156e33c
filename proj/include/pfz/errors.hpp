#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace pfz {

enum class ErrorKind {
  invalid_spec,
  domain_error,
  non_convergence,
  non_finite,
  pole_proximity,
  non_integrable_transform,
  grid_too_small,
  non_smooth_point,
  series_divergence,
  precision_exhausted,
  boundary_too_close_to_zero,
  non_integer_result,
  insufficient_data,
  truncation_cap_exceeded,
  range_exceeded,
};

const char* to_string(ErrorKind kind);

/// Base for every numerical failure raised by the library. The kind lets
/// callers (the CLI in particular) map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class PoleProximityError : public Error {
 public:
  PoleProximityError(std::complex<double> pole, const std::string& what)
      : Error(ErrorKind::pole_proximity, what), pole_(pole) {}
  std::complex<double> pole() const { return pole_; }

 private:
  std::complex<double> pole_;
};

/// Raised where a complex location matters for recovery (contour edges,
/// scan points).
class LocatedError : public Error {
 public:
  LocatedError(ErrorKind kind, std::complex<double> where, const std::string& what)
      : Error(kind, what), where_(where) {}
  std::complex<double> where() const { return where_; }

 private:
  std::complex<double> where_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "InvalidSpec";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::pole_proximity: return "PoleProximity";
    case ErrorKind::non_integrable_transform: return "NonIntegrableTransform";
    case ErrorKind::grid_too_small: return "GridTooSmall";
    case ErrorKind::non_smooth_point: return "NonSmoothPoint";
    case ErrorKind::series_divergence: return "SeriesDivergence";
    case ErrorKind::precision_exhausted: return "PrecisionExhausted";
    case ErrorKind::boundary_too_close_to_zero: return "BoundaryTooCloseToZero";
    case ErrorKind::non_integer_result: return "NonIntegerResult";
    case ErrorKind::insufficient_data: return "InsufficientData";
    case ErrorKind::truncation_cap_exceeded: return "TruncationCapExceeded";
    case ErrorKind::range_exceeded: return "RangeExceeded";
  }
  return "Error";
}

}  // namespace pfz
