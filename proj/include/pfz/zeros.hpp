#pragma once

// Zero location and counting for even entire functions that are real on the
// real axis: sign-change scanning with bisection and Newton polish, the
// argument principle on rectangles, and zero continuation along a parameter.
// Shared by the deformed transforms and the xi function.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pfz {

/// A value represented as mantissa * exp(log_scale). noise is the absolute
/// numerical error of the mantissa; values whose |mantissa| <= noise carry
/// no reliable sign or phase.
struct ScaledValue {
  std::complex<double> mantissa;
  std::complex<double> log_scale{0.0, 0.0};
  double noise = 0.0;

  std::complex<double> value() const { return mantissa * std::exp(log_scale); }
  /// |mantissa| / noise; infinity when noise is 0.
  double signal_to_noise() const;
};

struct AnalyticSampler {
  std::function<ScaledValue(std::complex<double>)> value;
  std::function<ScaledValue(std::complex<double>)> derivative;
};

struct ZeroRow {
  double z = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;
  double derivative = 0.0;
  /// Evaluation noise plus |Z'| ulp(z) / 2, the residual floor of a double z.
  double noise = 0.0;
  /// |Z(z_k)| < 100 * noise at the reported zero.
  bool accepted = false;
};

struct ZeroTable {
  double b = 0.0;
  double scan_lo = 0.0;
  double z_max = 0.0;
  double step = 0.0;
  std::vector<ZeroRow> zeros;
  std::vector<std::string> warnings;
  /// Method description: route, precision, quadrature settings.
  std::string method;
  long evaluations = 0;

  std::vector<double> locations() const;
};

struct ScanOptions {
  /// Initial grid spacing; non-positive selects pi / (2 z_max^{1/3} * 2).
  double step = 0.0;
  int max_refine_depth = 6;
  double bisect_width = 1e-12;
  int newton_steps = 4;
  int threads = 1;
};

/// Default scan step pi / (2 c z_max^{1/3}) with c = 2.
double default_scan_step(double z_max);

/// Scans [0, z_max] for sign changes of the real function and resolves each
/// to a zero. Throws LocatedError(precision_exhausted) when the sign of the
/// function cannot be resolved near a scan point.
ZeroTable find_real_zeros(const AnalyticSampler& f, double z_max, const ScanOptions& opts = {});

struct Rect {
  double re_lo = 0.0;
  double re_hi = 1.0;
  double im_half = 1.0;

  void validate() const;
};

struct RectCount {
  int count = 0;
  double winding = 0.0;
  double distance_from_integer = 0.0;
  long samples = 0;
  /// Smallest |mantissa| / noise met on the boundary.
  double min_boundary_snr = 0.0;
};

struct ContourOptions {
  /// Initial samples per unit length (at least 16 per edge).
  double density = 10.0;
  /// Boundary values must exceed this multiple of their noise.
  double boundary_margin = 1e3;
  int max_bisections = 40;
  int threads = 1;
};

/// Argument-principle count of zeros inside the rectangle. Throws
/// LocatedError(boundary_too_close_to_zero) or Error(non_integer_result).
RectCount count_zeros_in_rect(const AnalyticSampler& f, const Rect& rect, const ContourOptions& opts = {});

struct RealityReport {
  double delta = 0.0;
  double z_max = 0.0;
  double height = 0.0;
  int real_count = 0;
  int rect_count = 0;
  double distance_from_integer = 0.0;
  bool pass = false;
  /// Right edges tried before one cleared the boundary check.
  std::vector<double> perturbed_edges;
  ZeroTable table;
  RectCount rect;
};

/// Counts real zeros on (delta, z_max] and compares with the argument
/// principle on [delta, z_max] x [-height, height]. delta is the first scan
/// point whose value is above noise. The right edge is nudged inward when it
/// lies too close to a zero.
RealityReport verify_reality(const AnalyticSampler& f, double z_max, double height, const ScanOptions& scan = {},
                             const ContourOptions& contour = {});

struct TrajectoryPoint {
  int zero_index = 0;
  double b = 0.0;
  double z = 0.0;
  /// The zero appeared, vanished or jumped relative to the previous b.
  bool discontinuity = false;
  bool ambiguous = false;
};

struct FlowResult {
  std::vector<double> b_grid;
  std::vector<ZeroTable> tables;
  std::vector<TrajectoryPoint> points;
  /// One entry per MatchAmbiguity event (recorded, not fatal).
  std::vector<std::string> ambiguities;
  std::vector<int> zero_counts;
};

/// Runs find_real_zeros for each b (sampler_for(b) builds the function) and
/// continues zeros between consecutive b by nearest-neighbor matching within
/// half the smallest neighbor gap.
FlowResult flow_zeros(const std::function<AnalyticSampler(double)>& sampler_for, const std::vector<double>& b_grid,
                      double z_max, const ScanOptions& opts = {});

}  // namespace pfz
