#include "pfz/zeros.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>

#include "pfz/errors.hpp"
#include "pfz/io.hpp"
#include "pfz/parallel.hpp"

namespace pfz {

double ScaledValue::signal_to_noise() const {
  const double m = std::abs(mantissa);
  if (noise <= 0.0) return m > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return m / noise;
}

std::vector<double> ZeroTable::locations() const {
  std::vector<double> out;
  out.reserve(zeros.size());
  for (const auto& r : zeros) out.push_back(r.z);
  return out;
}

double default_scan_step(double z_max) {
  return std::numbers::pi / (2.0 * 2.0 * std::cbrt(std::max(z_max, 1.0)));
}

void Rect::validate() const {
  if (!(re_lo < re_hi)) throw Error(ErrorKind::domain_error, "rectangle needs re_lo < re_hi");
  if (!(im_half > 0.0)) throw Error(ErrorKind::domain_error, "rectangle needs a positive half height");
}

namespace {

struct ScanPoint {
  double z = 0.0;
  double mantissa = 0.0;
  double log_magnitude = 0.0;
  double noise = 0.0;
};

double log_magnitude(const ScaledValue& v) {
  return std::log(std::abs(v.mantissa)) + v.log_scale.real();
}

bool opposite(const ScanPoint& a, const ScanPoint& b) { return (a.mantissa < 0.0) != (b.mantissa < 0.0); }

class Scanner {
 public:
  Scanner(const AnalyticSampler& f, const ScanOptions& opts, double step) : f_(f), opts_(opts), step_(step) {}

  ScaledValue raw(double z) {
    ++evaluations_;
    return f_.value({z, 0.0});
  }

  /// Samples z, nudging it when the value sits at noise level.
  ScanPoint point(double z, double lo_limit, double hi_limit) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double shift = attempt == 0 ? 0.0 : step_ / 16.0 * attempt * (attempt % 2 ? 1.0 : -1.0);
      const double zz = std::clamp(z + shift, lo_limit, hi_limit);
      const ScaledValue v = raw(zz);
      if (std::abs(v.mantissa.real()) > v.noise) return {zz, v.mantissa.real(), log_magnitude(v), v.noise};
    }
    throw LocatedError(ErrorKind::precision_exhausted, {z, 0.0},
                       "sign of the function cannot be resolved near z = " + io::format_double(z) +
                           " (value indistinguishable from its numerical error)");
  }

  std::vector<ScanPoint> grid(double lo, double hi, int n) {
    std::vector<double> zs(n + 1);
    for (int i = 0; i <= n; ++i) zs[i] = i == n ? hi : lo + (hi - lo) * i / n;
    const double slack = (hi - lo) / n / 4.0;
    return parallel_map(zs.size(), opts_.threads, [&](std::size_t i) {
      return point(zs[i], std::max(0.0, zs[i] - slack), zs[i] + slack);
    });
  }

  std::vector<ScanPoint> refine(std::vector<ScanPoint> pts, int depth) {
    if (depth >= opts_.max_refine_depth || pts.size() < 3) return pts;
    std::vector<ScanPoint> out{pts.front()};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const bool dip = i + 1 < pts.size() && !opposite(pts[i - 1], pts[i]) && !opposite(pts[i], pts[i + 1]) &&
                       pts[i].log_magnitude < pts[i - 1].log_magnitude &&
                       pts[i].log_magnitude < pts[i + 1].log_magnitude;
      if (!dip) {
        out.push_back(pts[i]);
        continue;
      }
      // A dip without a sign change may hide a close pair of zeros.
      std::vector<ScanPoint> sub{pts[i - 1]};
      const double a = pts[i - 1].z, c = pts[i + 1].z;
      const int pieces = 8;
      const double slack = (c - a) / pieces / 4.0;
      for (int k = 1; k < pieces; ++k) {
        const double z = a + (c - a) * k / pieces;
        sub.push_back(point(z, z - slack, z + slack));
      }
      sub.push_back(pts[i + 1]);
      sub = refine(std::move(sub), depth + 1);
      int changes = 0;
      for (std::size_t k = 1; k < sub.size(); ++k) changes += opposite(sub[k - 1], sub[k]);
      if (changes >= 2)
        warnings_.push_back("StepTooCoarse: " + std::to_string(changes) + " sign changes within [" +
                            io::format_double(a) + ", " + io::format_double(c) + "], auto-refined");
      out.insert(out.end(), sub.begin() + 1, sub.end() - 1);
    }
    return out;
  }

  ZeroRow resolve(ScanPoint lo, ScanPoint hi) {
    std::optional<double> at_noise;
    while (hi.z - lo.z > opts_.bisect_width) {
      const double mid = 0.5 * (lo.z + hi.z);
      if (mid <= lo.z || mid >= hi.z) break;
      const ScaledValue v = raw(mid);
      const double m = v.mantissa.real();
      if (std::abs(m) <= v.noise) {
        at_noise = mid;
        break;
      }
      const ScanPoint p{mid, m, log_magnitude(v), v.noise};
      if (opposite(lo, p)) hi = p;
      else lo = p;
    }
    double z = at_noise.value_or(0.5 * (lo.z + hi.z));
    ScaledValue v = raw(z);
    for (int s = 0; s < opts_.newton_steps; ++s) {
      if (std::abs(v.mantissa) == 0.0) break;
      ++evaluations_;
      const ScaledValue d = f_.derivative({z, 0.0});
      if (std::abs(d.mantissa) == 0.0) break;
      const double ratio = (v.mantissa / d.mantissa * std::exp(v.log_scale - d.log_scale)).real();
      const double next = z - ratio;
      if (!(next >= lo.z && next <= hi.z) || next == z) break;
      const ScaledValue vn = raw(next);
      if (!(log_magnitude(vn) < log_magnitude(v))) break;
      z = next;
      v = vn;
    }
    ++evaluations_;
    const ScaledValue d = f_.derivative({z, 0.0});
    ZeroRow row;
    row.z = z;
    row.bracket_lo = lo.z;
    row.bracket_hi = hi.z;
    const double scale = std::exp(v.log_scale.real());
    row.residual = std::abs(v.mantissa) * scale;
    row.derivative = d.value().real();
    // A double z sits up to half an ulp from the true zero, which costs |Z'| ulp / 2 in |Z|.
    const double quantum = 0.5 * std::abs(row.derivative) * (std::nextafter(z, std::numeric_limits<double>::infinity()) - z);
    row.noise = v.noise * scale + quantum;
    row.accepted = row.residual < 100.0 * row.noise || row.residual == 0.0;
    return row;
  }

  long evaluations() const { return evaluations_; }
  std::vector<std::string>& warnings() { return warnings_; }

 private:
  const AnalyticSampler& f_;
  const ScanOptions& opts_;
  double step_;
  std::atomic<long> evaluations_{0};
  std::vector<std::string> warnings_;
};

}  // namespace

ZeroTable find_real_zeros(const AnalyticSampler& f, double z_max, const ScanOptions& opts) {
  if (!(z_max > 0.0)) throw Error(ErrorKind::domain_error, "z_max must be positive");
  const double step = opts.step > 0.0 ? opts.step : default_scan_step(z_max);
  Scanner scanner(f, opts, step);
  const int n = std::max(2, static_cast<int>(std::ceil(z_max / step)));
  std::vector<ScanPoint> pts = scanner.refine(scanner.grid(0.0, z_max, n), 0);

  ZeroTable table;
  table.scan_lo = 0.0;
  table.z_max = z_max;
  table.step = z_max / n;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (opposite(pts[i - 1], pts[i])) table.zeros.push_back(scanner.resolve(pts[i - 1], pts[i]));
  table.warnings = std::move(scanner.warnings());
  table.evaluations = scanner.evaluations();
  return table;
}

namespace {

class ContourWalker {
 public:
  ContourWalker(const AnalyticSampler& f, const ContourOptions& opts) : f_(f), opts_(opts) {}

  ScaledValue sample(std::complex<double> z) {
    ++samples_;
    ScaledValue v = f_.value(z);
    const double snr = v.signal_to_noise();
    if (!(snr > opts_.boundary_margin))
      throw LocatedError(ErrorKind::boundary_too_close_to_zero, z,
                         "|Z| on the contour is within " + io::format_double(opts_.boundary_margin) +
                             "x its numerical error at z = " + io::format_double(z.real()) + " + " +
                             io::format_double(z.imag()) + "i; perturb the rectangle");
    return v;
  }

  double edge(std::complex<double> from, std::complex<double> to) {
    const double len = std::abs(to - from);
    const int n = std::max(16, static_cast<int>(std::ceil(len * opts_.density)));
    std::vector<std::complex<double>> zs(n + 1);
    for (int j = 0; j <= n; ++j) zs[j] = j == n ? to : from + (to - from) * (static_cast<double>(j) / n);
    const auto vals = parallel_map(zs.size(), opts_.threads, [&](std::size_t j) { return sample(zs[j]); });
    for (const auto& v : vals) min_snr_ = std::min(min_snr_, v.signal_to_noise());
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += segment(zs[j], vals[j], zs[j + 1], vals[j + 1], 0);
    return total;
  }

  long samples() const { return samples_; }
  double min_snr() const { return min_snr_; }

 private:
  double segment(std::complex<double> za, const ScaledValue& va, std::complex<double> zb, const ScaledValue& vb,
                 int depth) {
    // Only the mantissa's phase is tracked: the log scale is single valued
    // along the contour, so its phase contributions cancel around the loop.
    const double darg = std::arg(vb.mantissa / va.mantissa);
    if (std::abs(darg) < std::numbers::pi / 2.0) return darg;
    if (depth >= opts_.max_bisections)
      throw LocatedError(ErrorKind::non_convergence, za, "argument increment did not resolve under bisection");
    const std::complex<double> zm = 0.5 * (za + zb);
    const ScaledValue vm = sample(zm);
    min_snr_ = std::min(min_snr_, vm.signal_to_noise());
    return segment(za, va, zm, vm, depth + 1) + segment(zm, vm, zb, vb, depth + 1);
  }

  const AnalyticSampler& f_;
  const ContourOptions& opts_;
  std::atomic<long> samples_{0};
  double min_snr_ = std::numeric_limits<double>::infinity();
};

}  // namespace

RectCount count_zeros_in_rect(const AnalyticSampler& f, const Rect& rect, const ContourOptions& opts) {
  rect.validate();
  ContourWalker walker(f, opts);
  const std::complex<double> c0(rect.re_lo, -rect.im_half), c1(rect.re_hi, -rect.im_half),
      c2(rect.re_hi, rect.im_half), c3(rect.re_lo, rect.im_half);
  const double total = walker.edge(c0, c1) + walker.edge(c1, c2) + walker.edge(c2, c3) + walker.edge(c3, c0);
  RectCount r;
  r.winding = total / (2.0 * std::numbers::pi);
  r.count = static_cast<int>(std::lround(r.winding));
  r.distance_from_integer = std::abs(r.winding - r.count);
  r.samples = walker.samples();
  r.min_boundary_snr = walker.min_snr();
  if (r.distance_from_integer > 0.1)
    throw Error(ErrorKind::non_integer_result,
                "winding number " + io::format_double(r.winding) + " is not within 0.1 of an integer");
  return r;
}

RealityReport verify_reality(const AnalyticSampler& f, double z_max, double height, const ScanOptions& scan,
                             const ContourOptions& contour) {
  if (!(height > 0.0)) throw Error(ErrorKind::domain_error, "height must be positive");
  RealityReport report;
  report.height = height;
  report.table = find_real_zeros(f, z_max, scan);
  const double step = report.table.step;

  // delta: first scan point with the value above noise.
  double delta = 0.0;
  while (f.value({delta, 0.0}).signal_to_noise() <= 1.0) {
    delta += step;
    if (delta >= z_max) throw Error(ErrorKind::precision_exhausted, "no scan point rises above noise");
  }
  report.delta = delta;

  double edge = z_max;
  for (int attempt = 0;; ++attempt) {
    try {
      report.rect = count_zeros_in_rect(f, {delta, edge, height}, contour);
      break;
    } catch (const LocatedError& e) {
      if (e.kind() != ErrorKind::boundary_too_close_to_zero || attempt >= 6) throw;
      report.perturbed_edges.push_back(edge);
      // Move whichever edge holds the offending point.
      if (std::abs(e.where().imag()) >= height * (1.0 - 1e-12)) height *= 0.93;
      else edge -= 0.137 * step;
    }
  }
  report.z_max = edge;
  report.height = height;
  report.real_count = static_cast<int>(std::count_if(report.table.zeros.begin(), report.table.zeros.end(),
                                                     [&](const ZeroRow& r) { return r.z > delta && r.z <= edge; }));
  report.rect_count = report.rect.count;
  report.distance_from_integer = report.rect.distance_from_integer;
  report.pass = report.real_count == report.rect_count;
  return report;
}

FlowResult flow_zeros(const std::function<AnalyticSampler(double)>& sampler_for, const std::vector<double>& b_grid,
                      double z_max, const ScanOptions& opts) {
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (b_grid[i] < 0.0) throw Error(ErrorKind::domain_error, "b values must be >= 0");
    if (i > 0 && !(b_grid[i] > b_grid[i - 1])) throw Error(ErrorKind::domain_error, "b_grid must be increasing");
  }
  FlowResult out;
  out.b_grid = b_grid;
  std::vector<double> prev;
  std::vector<int> prev_ids;
  int next_id = 0;
  for (std::size_t bi = 0; bi < b_grid.size(); ++bi) {
    const double b = b_grid[bi];
    ZeroTable t = find_real_zeros(sampler_for(b), z_max, opts);
    t.b = b;
    const std::vector<double> cur = t.locations();
    out.zero_counts.push_back(static_cast<int>(cur.size()));

    // Matching radius: half the gap to the nearest neighbor.
    std::vector<double> radius(prev.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      if (i > 0) radius[i] = std::min(radius[i], 0.5 * (prev[i] - prev[i - 1]));
      if (i + 1 < prev.size()) radius[i] = std::min(radius[i], 0.5 * (prev[i + 1] - prev[i]));
    }
    std::vector<int> owner(prev.size(), -1);
    std::vector<int> ids(cur.size(), -1);
    std::vector<bool> ambiguous(cur.size(), false);
    for (std::size_t c = 0; c < cur.size(); ++c) {
      int best = -1, within = 0;
      for (std::size_t p = 0; p < prev.size(); ++p) {
        if (std::abs(cur[c] - prev[p]) <= radius[p]) {
          ++within;
          if (best < 0 || std::abs(cur[c] - prev[p]) < std::abs(cur[c] - prev[best])) best = static_cast<int>(p);
        }
      }
      if (within > 1) ambiguous[c] = true;
      if (best < 0) continue;
      if (owner[best] >= 0) {
        ambiguous[c] = true;
        ambiguous[owner[best]] = true;
        const int rival = owner[best];
        if (std::abs(cur[c] - prev[best]) >= std::abs(cur[rival] - prev[best])) continue;
        ids[rival] = -1;
      }
      owner[best] = static_cast<int>(c);
      ids[c] = prev_ids[best];
    }
    for (std::size_t c = 0; c < cur.size(); ++c) {
      TrajectoryPoint pt;
      pt.b = b;
      pt.z = cur[c];
      pt.ambiguous = ambiguous[c];
      if (ids[c] < 0) {
        ids[c] = next_id++;
        pt.discontinuity = bi > 0;
      }
      pt.zero_index = ids[c];
      if (ambiguous[c])
        out.ambiguities.push_back("MatchAmbiguity: zero near z = " + io::format_double(cur[c]) +
                                  " at b = " + io::format_double(b));
      out.points.push_back(pt);
    }
    for (std::size_t p = 0; p < prev.size(); ++p) {
      if (owner[p] < 0) {
        TrajectoryPoint gone;
        gone.zero_index = prev_ids[p];
        gone.b = b;
        gone.z = std::numeric_limits<double>::quiet_NaN();
        gone.discontinuity = true;
        out.points.push_back(gone);
      }
    }
    prev = cur;
    prev_ids = ids;
    out.tables.push_back(std::move(t));
  }
  return out;
}

}  // namespace pfz
