#include "pfz/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

#include "pfz/errors.hpp"

namespace pfz {

const char* to_string(PrecisionMode mode) {
  return mode == PrecisionMode::native ? "native" : "extended";
}

double unit_roundoff(PrecisionMode mode) {
  return mode == PrecisionMode::native ? 1.1102230246251565e-16 : 4.93038065763132e-32;
}

void PrecisionConfig::validate() const {
  if (!(escalate_threshold > 0.0 && escalate_threshold < 1.0))
    throw Error(ErrorKind::invalid_spec, "escalate_threshold must lie in (0, 1)");
}

void QuadratureConfig::validate() const {
  if (panel_order < 4 || panel_order > 64)
    throw Error(ErrorKind::invalid_spec, "panel_order must lie in [4, 64]");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorKind::invalid_spec, "tolerances must be positive");
  if (max_refinements < 0) throw Error(ErrorKind::invalid_spec, "max_refinements must be >= 0");
  if (truncation_radius && !(*truncation_radius > 0.0))
    throw Error(ErrorKind::invalid_spec, "truncation_radius must be positive");
}

namespace {

std::string format_sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

GaussRule compute_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto legendre = [n](const ExtendedReal& x, ExtendedReal& pn, ExtendedReal& dpn) {
    ExtendedReal p0 = 1.0;
    ExtendedReal p1 = x;
    for (int k = 1; k < n; ++k) {
      const ExtendedReal p2 = ((2.0 * k + 1.0) * x * p1 - static_cast<double>(k) * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    pn = n == 0 ? ExtendedReal(1.0) : p1;
    dpn = static_cast<double>(n) * (x * pn - p0) / (x * x - 1.0);
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double guess = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    // Native Newton first, then two double-double corrections.
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = guess;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * guess * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (guess * p1 - p0) / (guess * guess - 1.0);
      const double step = p1 / dp;
      guess -= step;
      if (std::abs(step) < 1e-16) break;
    }
    ExtendedReal x = guess;
    ExtendedReal pn, dpn;
    for (int it = 0; it < 3; ++it) {
      legendre(x, pn, dpn);
      x = x - pn / dpn;
    }
    legendre(x, pn, dpn);
    const ExtendedReal w = 2.0 / ((1.0 - x * x) * dpn * dpn);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  rule.nodes_native.resize(n);
  rule.weights_native.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes_native[i] = rule.nodes[i].to_double();
    rule.weights_native[i] = rule.weights[i].to_double();
  }
  return rule;
}

struct Panel {
  double a;
  double b;
  int depth;
  ExtendedComplex value;
  double error = 0.0;
  double abs_integral = 0.0;
  double parent_error = std::numeric_limits<double>::infinity();
  /// Consecutive halvings that failed to shrink the error estimate.
  int stalls = 0;
};

class PanelIntegrator {
 public:
  PanelIntegrator(const Integrand& f, int order, PrecisionMode mode)
      : f_(f), low_(gauss_legendre(order)), high_(gauss_legendre(2 * order)), mode_(mode) {}

  void evaluate(Panel& p) {
    double abs_low = 0.0, abs_high = 0.0;
    const ExtendedComplex low = apply(low_, p, abs_low);
    const ExtendedComplex high = apply(high_, p, abs_high);
    p.value = high;
    p.error = (high - low).abs();
    p.abs_integral = abs_high;
  }

  long evaluations() const { return evaluations_; }

 private:
  ExtendedComplex apply(const GaussRule& rule, const Panel& p, double& abs_sum) {
    const std::size_t n = rule.nodes.size();
    abs_sum = 0.0;
    if (mode_ == PrecisionMode::native) {
      const double mid = 0.5 * (p.a + p.b);
      const double half = 0.5 * (p.b - p.a);
      std::complex<double> sum = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double x = mid + half * rule.nodes_native[k];
        const std::complex<double> v = f_.value(x);
        check(v, x);
        sum += rule.weights_native[k] * v;
        abs_sum += rule.weights_native[k] * magnitude(v, x);
      }
      evaluations_ += static_cast<long>(n);
      abs_sum *= half;
      return ExtendedComplex(sum * half);
    }
    const ExtendedReal mid = (ExtendedReal(p.a) + p.b) * 0.5;
    const ExtendedReal half = (ExtendedReal(p.b) - p.a) * 0.5;
    ExtendedComplex sum;
    for (std::size_t k = 0; k < n; ++k) {
      const ExtendedReal x = mid + half * rule.nodes[k];
      ExtendedComplex v = f_.value_extended ? f_.value_extended(x)
                                            : ExtendedComplex(f_.value(x.to_double()));
      const std::complex<double> vd = v.to_complex();
      check(vd, x.to_double());
      sum += v * rule.weights[k];
      abs_sum += rule.weights_native[k] * magnitude(vd, x.to_double());
    }
    evaluations_ += static_cast<long>(n);
    abs_sum *= half.to_double();
    return sum * half;
  }

  // |f| for the cancellation ratio and the noise floor, raised to the
  // declared sample noise scale when one is given.
  double magnitude(std::complex<double> v, double x) const {
    return f_.noise ? std::max(std::abs(v), f_.noise(x)) : std::abs(v);
  }

  static void check(std::complex<double> v, double x) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::non_finite, "integrand is not finite at u = " + std::to_string(x));
  }

  const Integrand& f_;
  const GaussRule& low_;
  const GaussRule& high_;
  PrecisionMode mode_;
  long evaluations_ = 0;
};

QuadratureResult integrate_once(const Integrand& f, double a, double b, const QuadratureConfig& qc,
                                PrecisionMode mode) {
  // Without an extended evaluator only the accumulation is extended; the
  // samples keep native precision and so do the tolerances.
  const bool extended_samples = mode == PrecisionMode::extended && f.value_extended;
  const double u = unit_roundoff(extended_samples ? PrecisionMode::extended : PrecisionMode::native);
  // Extended runs tighten the requested tolerances by the precision gain.
  const double scale = extended_samples ? 1e-17 : 1.0;
  const double abs_tol = qc.abs_tol * scale;
  const double rel_tol = qc.rel_tol * scale;

  const auto envelope = f.envelope ? f.envelope : [&f](double x) { return std::abs(f.value(x)); };
  double lo = a, hi = b;
  if (qc.truncation_radius) {
    lo = std::max(lo, -*qc.truncation_radius);
    hi = std::min(hi, *qc.truncation_radius);
  }
  if (std::isinf(lo)) lo = -auto_truncation(envelope, -1.0, abs_tol);
  if (std::isinf(hi)) hi = auto_truncation(envelope, 1.0, abs_tol);

  QuadratureResult result;
  result.lower = lo;
  result.upper = hi;
  result.precision = mode;
  if (!(hi > lo)) return result;

  const double length = hi - lo;
  double max_width = length / 4.0;
  if (f.frequency > 0.0) max_width = std::min(max_width, std::numbers::pi / (2.0 * f.frequency));
  const int initial = static_cast<int>(std::ceil(length / max_width - 1e-9));

  PanelIntegrator integrator(f, qc.panel_order, mode);
  std::vector<Panel> accepted;
  std::vector<Panel> pending;
  pending.reserve(static_cast<std::size_t>(initial));
  for (int i = 0; i < initial; ++i) {
    const double pa = lo + length * i / initial;
    const double pb = i + 1 == initial ? hi : lo + length * (i + 1) / initial;
    pending.push_back({pa, pb, 0, {}, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0});
  }
  for (auto& p : pending) integrator.evaluate(p);

  bool failed = false;
  while (!pending.empty()) {
    ExtendedComplex total;
    for (const auto& p : accepted) total += p.value;
    for (const auto& p : pending) total += p.value;
    const double tol = std::max(abs_tol, rel_tol * total.abs());

    std::vector<Panel> next;
    for (auto& p : pending) {
      const double share = tol * (p.b - p.a) / length;
      const double floor = 16.0 * u * p.abs_integral;
      // A smooth panel's error drops by orders of magnitude per halving; one
      // that keeps a tenth of its parent's error three times running is at
      // the noise of its samples, and refining it further only multiplies
      // the work.
      if (p.error > 0.1 * p.parent_error) ++p.stalls;
      else p.stalls = 0;
      if (p.error <= share || p.error <= floor) {
        accepted.push_back(p);
      } else if (p.stalls >= 3) {
        ++result.noise_limited_panels;
        accepted.push_back(p);
      } else if (p.depth >= qc.max_refinements) {
        failed = true;
        accepted.push_back(p);
      } else {
        const double m = 0.5 * (p.a + p.b);
        Panel left{p.a, m, p.depth + 1, {}, 0.0, 0.0, p.error, p.stalls};
        Panel right{m, p.b, p.depth + 1, {}, 0.0, 0.0, p.error, p.stalls};
        integrator.evaluate(left);
        integrator.evaluate(right);
        next.push_back(left);
        next.push_back(right);
      }
    }
    pending = std::move(next);
  }

  // Sum in panel order so the result does not depend on refinement history.
  std::sort(accepted.begin(), accepted.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  ExtendedComplex total;
  double error = 0.0, abs_integral = 0.0;
  for (const auto& p : accepted) {
    total += p.value;
    error += p.error;
    abs_integral += p.abs_integral;
  }
  result.value_extended = total;
  result.value = total.to_complex();
  result.abs_integral = abs_integral;
  result.error = std::max(error, 4.0 * u * abs_integral);
  result.cancellation_ratio = abs_integral > 0.0 ? std::abs(result.value) / abs_integral : 1.0;
  result.panels = static_cast<int>(accepted.size());
  result.evaluations = integrator.evaluations();

  const double tol = std::max(abs_tol, rel_tol * std::abs(result.value));
  if (failed && error > tol && error > 16.0 * u * abs_integral)
    throw Error(ErrorKind::non_convergence,
                "refinement limit reached with error estimate " + format_sci(error) + " above tolerance " +
                    format_sci(tol));
  return result;
}

}  // namespace

double auto_truncation(const std::function<double(double)>& envelope, double sign, double tol) {
  const double target = tol / 10.0;
  int below = 0;
  double previous = std::numeric_limits<double>::infinity();
  for (double u = 1.0; u < 1e6; u *= 1.25) {
    const double e = envelope(sign * u);
    if (!std::isfinite(e))
      throw Error(ErrorKind::non_finite, "envelope is not finite at u = " + std::to_string(sign * u));
    // A rising tail (a moment weight before its peak) never counts as small.
    const double tail = e * u;
    below = tail < target && tail <= previous ? below + 1 : 0;
    previous = tail;
    if (below == 2) return u;
  }
  throw Error(ErrorKind::non_convergence, "automatic truncation found no radius below 1e6");
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > kMaxGaussOrder)
    throw Error(ErrorKind::domain_error, "Gauss-Legendre order out of range");
  static std::array<std::once_flag, kMaxGaussOrder + 1> flags;
  static std::array<GaussRule, kMaxGaussOrder + 1> rules;
  std::call_once(flags[order], [order] { rules[order] = compute_rule(order); });
  return rules[order];
}

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureConfig& qc, const PrecisionConfig& pc) {
  qc.validate();
  pc.validate();
  if (!(a < b)) throw Error(ErrorKind::domain_error, "integrate_adaptive requires a < b");
  if ((std::isinf(a) || std::isinf(b)) && !f.envelope && !f.value)
    throw Error(ErrorKind::domain_error, "infinite limits need an integrand");

  QuadratureResult r = integrate_once(f, a, b, qc, pc.mode);
  if (pc.mode == PrecisionMode::native && r.cancellation_ratio < pc.escalate_threshold) {
    r = integrate_once(f, a, b, qc, PrecisionMode::extended);
    r.escalated = true;
  }
  return r;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureConfig& qc, const PrecisionConfig& pc) {
  Integrand g;
  g.value = [&f](double x) { return std::complex<double>(f(x), 0.0); };
  return integrate_adaptive(g, a, b, qc, pc);
}

}  // namespace pfz
