#include "pfz/pfreq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

#include "pfz/errors.hpp"
#include "pfz/io.hpp"

namespace pfz {

ExtendedReal DensitySource::eval_extended(const ExtendedReal& a) const {
  if (value_extended) return value_extended(a);
  return ExtendedReal(value(a.to_double()));
}

namespace {

double real_part(double v) { return v; }
double real_part(const ExtendedReal& v) { return v.to_double(); }

template <class Real>
Real power(const Real& x, int n) {
  if constexpr (std::is_same_v<Real, double>) {
    return std::pow(x, n);
  } else {
    return pow(x, n);
  }
}

template <class Real>
Real exponential(const Real& x) {
  if constexpr (std::is_same_v<Real, double>) {
    return std::exp(x);
  } else {
    return exp(x);
  }
}

struct PoleGroup {
  double c = 0.0;
  int multiplicity = 0;
};

std::vector<PoleGroup> group_coefficients(const std::vector<double>& coeffs) {
  std::map<double, int> counts;
  for (double c : coeffs) ++counts[c];
  std::vector<PoleGroup> out;
  for (auto [c, k] : counts) out.push_back({c, k});
  return out;
}

void require_closed_form(const SchoenbergParams& params) {
  if (params.d() != 0.0) throw Error(ErrorKind::domain_error, "the closed form of f requires d = 0");
  if (params.coeffs().empty())
    throw Error(ErrorKind::non_integrable_transform, "d = 0 with no coefficients: f is a point mass at omega");
}

}  // namespace

template <class Real>
Real eval_f_closed_form(const SchoenbergParams& params, const Real& a) {
  require_closed_form(params);
  const std::vector<PoleGroup> groups = group_coefficients(params.coeffs());
  const Real x = a - (params.omega() + params.coeff_sum());
  // F(w) = prod (1 + c w)^{-k} = K prod (w - p)^{-k} with p = -1/c.
  Real result = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const PoleGroup& gi = groups[i];
    const Real y = -x / Real(gi.c);
    if (real_part(y) < 0.0) continue;
    const Real pi_ = Real(-1.0) / Real(gi.c);
    // Taylor coefficients at p_i of g_i = K prod_{j != i} (w - p_j)^{-k_j},
    // from g' = g h' with h' = sum_j -k_j / (w - p_j).
    Real g0 = 1.0;
    for (std::size_t j = 0; j < groups.size(); ++j) {
      g0 = g0 / power(Real(groups[j].c), groups[j].multiplicity);
      if (j != i) g0 = g0 / power(pi_ - Real(-1.0) / Real(groups[j].c), groups[j].multiplicity);
    }
    const int k = gi.multiplicity;
    std::vector<Real> g(k, Real(0.0)), h(k, Real(0.0));
    g[0] = g0;
    for (int n = 0; n + 1 < k; ++n) {
      for (std::size_t j = 0; j < groups.size(); ++j) {
        if (j == i) continue;
        const Real diff = pi_ - Real(-1.0) / Real(groups[j].c);
        const Real term = Real(static_cast<double>(groups[j].multiplicity)) / power(diff, n + 1);
        h[n] = h[n] + (n % 2 == 0 ? -term : term);
      }
    }
    for (int n = 0; n + 1 < k; ++n) {
      Real acc = 0.0;
      for (int m = 0; m <= n; ++m) acc = acc + g[m] * h[n - m];
      g[n + 1] = acc / Real(static_cast<double>(n + 1));
    }
    // (w - p)^{-r} = c^r (1 + c w)^{-r}, the transform of the Gamma(r) law
    // scaled by -c: density y^{r-1} e^{-y} / ((r-1)! |c|) at y = -x / c.
    const Real ey = exponential(-y);
    double factorial = 1.0;
    for (int r = 1; r <= k; ++r) {
      if (r > 1) factorial *= r - 1;
      const Real coeff = g[k - r];
      const Real component = power(y, r - 1) * ey / Real(factorial * std::abs(gi.c));
      result = result + coeff * power(Real(gi.c), r) * component;
    }
  }
  return result;
}

template double eval_f_closed_form<double>(const SchoenbergParams&, const double&);
template ExtendedReal eval_f_closed_form<ExtendedReal>(const SchoenbergParams&, const ExtendedReal&);

namespace {

ExtendedReal exact_shift(const SchoenbergParams& params) {
  ExtendedReal s = params.omega();
  for (double c : params.coeffs()) s += c;
  return s;
}

QuadratureResult inversion_integral(const SchoenbergParams& params, const ExtendedReal& a,
                                    const QuadratureConfig& qc, const PrecisionConfig& pc) {
  if (params.d() == 0.0 && params.coeffs().size() < 2)
    throw Error(ErrorKind::non_integrable_transform,
                "p is not absolutely integrable (d = 0 and fewer than two coefficients)");
  const ExtendedReal freq_ext = exact_shift(params) - a;
  const double freq = freq_ext.to_double();
  const double d = params.d();
  const std::vector<double> cs = params.coeffs();
  Integrand f;
  f.value = [d, freq, cs](double t) {
    std::complex<double> v = std::exp(std::complex<double>(-d * t * t, freq * t));
    for (double c : cs) v /= std::complex<double>(1.0, c * t);
    return v;
  };
  f.value_extended = [d, freq_ext, cs](const ExtendedReal& t) {
    ExtendedComplex v = exp(ExtendedComplex(-(t * t) * d, t * freq_ext));
    for (double c : cs) v = v / ExtendedComplex(ExtendedReal(1.0), t * c);
    return v;
  };
  f.envelope = [d, cs](double t) {
    double e = std::exp(-d * t * t);
    for (double c : cs) e /= std::sqrt(1.0 + c * c * t * t);
    return e;
  };
  f.frequency = std::abs(freq);
  const double inf = std::numeric_limits<double>::infinity();
  QuadratureResult r = integrate_adaptive(f, -inf, inf, qc, pc);
  const double scale = 1.0 / (2.0 * std::numbers::pi);
  if (std::abs(r.value.imag()) > 1e-10 * std::max(std::abs(r.value.real()), r.abs_integral))
    throw Error(ErrorKind::non_convergence, "inversion integral left a non-negligible imaginary part");
  r.value = {r.value.real() * scale, 0.0};
  r.value_extended = ExtendedComplex(r.value_extended.re / xconst::two_pi());
  r.error *= scale;
  r.abs_integral *= scale;
  return r;
}

}  // namespace

QuadratureResult eval_f_quadrature(const SchoenbergParams& params, double a, const QuadratureConfig& qc,
                                   const PrecisionConfig& pc) {
  return inversion_integral(params, ExtendedReal(a), qc, pc);
}

double eval_f(const SchoenbergParams& params, double a, const QuadratureConfig& qc, const PrecisionConfig& pc) {
  if (params.d() == 0.0) return eval_f_closed_form(params, a);
  return eval_f_quadrature(params, a, qc, pc).value.real();
}

ExtendedReal eval_f_extended(const SchoenbergParams& params, const ExtendedReal& a, const QuadratureConfig& qc) {
  if (params.d() == 0.0) return eval_f_closed_form(params, a);
  const PrecisionConfig pc{PrecisionMode::extended, 1e-6};
  return inversion_integral(params, a, qc, pc).value_extended.re;
}

DensitySource schoenberg_source(const SchoenbergParams& params, const QuadratureConfig& qc) {
  DensitySource s;
  s.name = "schoenberg";
  s.value = [params, qc](double a) { return eval_f(params, a, qc); };
  s.value_extended = [params, qc](const ExtendedReal& a) { return eval_f_extended(params, a, qc); };
  return s;
}

DensitySource closed_form_source(std::string name, std::function<double(double)> value,
                                 std::function<ExtendedReal(const ExtendedReal&)> value_extended) {
  if (!value) throw Error(ErrorKind::invalid_spec, "closed-form source needs an evaluator");
  return {std::move(name), std::move(value), std::move(value_extended)};
}

DensitySource tabulated_source(std::vector<double> xs, std::vector<double> ys, int degree) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw Error(ErrorKind::invalid_spec, "tabulated density needs at least two (x, f) pairs");
  if (degree < 1) throw Error(ErrorKind::invalid_spec, "interpolation degree must be >= 1");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      throw Error(ErrorKind::invalid_spec, "tabulated density contains non-finite values");
    if (i > 0 && !(xs[i] > xs[i - 1]))
      throw Error(ErrorKind::invalid_spec, "tabulated abscissae must be strictly increasing");
  }
  const int nodes = std::min<int>(degree + 1, static_cast<int>(xs.size()));
  auto eval = [xs = std::move(xs), ys = std::move(ys), nodes](double x) {
    if (x < xs.front() || x > xs.back()) return 0.0;
    const int n = static_cast<int>(xs.size());
    const int idx = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    const int start = std::clamp(idx - nodes / 2, 0, n - nodes);
    double sum = 0.0;
    for (int i = start; i < start + nodes; ++i) {
      if (x == xs[i]) return ys[i];
      double w = ys[i];
      for (int j = start; j < start + nodes; ++j)
        if (j != i) w *= (x - xs[j]) / (xs[i] - xs[j]);
      sum += w;
    }
    return sum;
  };
  return {"tabulated", std::move(eval), {}};
}

DensitySource tabulated_source_from_csv(const std::string& path, int degree) {
  const io::Table t = io::read_csv(path);
  if (t.header.size() != 2) throw Error(ErrorKind::invalid_spec, "density CSV must have exactly two columns");
  DensitySource s = tabulated_source(t.numeric_column(0), t.numeric_column(1), degree);
  s.name = "tabulated:" + path;
  return s;
}

DensitySource bimodal_control_source(double shift) {
  const auto g = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  const auto gx = [](const ExtendedReal& x) { return exp(-(x * x) * 0.5) / sqrt(xconst::two_pi()); };
  return {"bimodal",
          [g, shift](double a) { return 0.5 * (g(a - shift) + g(a + shift)); },
          [gx, shift](const ExtendedReal& a) { return (gx(a - shift) + gx(a + shift)) * 0.5; }};
}

ExtendedReal determinant(std::vector<std::vector<ExtendedReal>> m) {
  const std::size_t n = m.size();
  ExtendedReal det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (abs(m[r][col]) > abs(m[pivot][col])) pivot = r;
    if (m[pivot][col].hi() == 0.0) return ExtendedReal(0.0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      const ExtendedReal factor = m[r][col] / m[col][col];
      for (std::size_t c = col + 1; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

namespace {

void require_increasing(const std::vector<double>& g, const char* what) {
  for (std::size_t i = 1; i < g.size(); ++i)
    if (!(g[i] > g[i - 1])) throw Error(ErrorKind::grid_too_small, std::string(what) + " must be strictly increasing");
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Advances an increasing index combination; false after the last one.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

std::vector<int> random_combination(int n, int k, std::mt19937_64& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> out;
  out.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  return out;
}

}  // namespace

TPReport check_pf_minors(const DensitySource& src, const std::vector<double>& xs, const std::vector<double>& ys,
                         int max_order, const MinorCheckOptions& opts) {
  if (max_order < 1 || max_order > 5) throw Error(ErrorKind::grid_too_small, "max_order must be in 1..5");
  require_increasing(xs, "xs");
  require_increasing(ys, "ys");
  if (static_cast<std::size_t>(max_order) > std::min(xs.size(), ys.size()))
    throw Error(ErrorKind::grid_too_small, "grids are shorter than max_order");

  const int nx = static_cast<int>(xs.size());
  const int ny = static_cast<int>(ys.size());
  std::vector<std::vector<ExtendedReal>> kernel(nx, std::vector<ExtendedReal>(ny));
  double kmax = 0.0;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      kernel[i][j] = src.eval_extended(ExtendedReal(xs[i]) - ys[j]);
      if (!kernel[i][j].is_finite()) throw Error(ErrorKind::non_finite, "density is not finite on the grid");
      kmax = std::max(kmax, std::abs(kernel[i][j].to_double()));
    }
  }

  TPReport report;
  report.seed = opts.seed;
  report.min_minor = std::numeric_limits<double>::infinity();
  for (int order = 1; order <= max_order; ++order) {
    TPOrderReport o;
    o.order = order;
    o.tol = opts.tol >= 0.0 ? opts.tol : 1e-9 * std::pow(kmax, order);
    o.min_minor = std::numeric_limits<double>::infinity();
    std::vector<std::vector<ExtendedReal>> sub(order, std::vector<ExtendedReal>(order));
    const auto visit = [&](const std::vector<int>& r, const std::vector<int>& c) {
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) sub[a][b] = kernel[r[a]][c[b]];
      const double det = determinant(sub).to_double();
      ++o.minors_evaluated;
      if (det < o.min_minor) {
        o.min_minor = det;
        o.min_rows.clear();
        o.min_cols.clear();
        for (int a : r) o.min_rows.push_back(xs[a]);
        for (int b : c) o.min_cols.push_back(ys[b]);
      }
    };
    const double total = binomial(nx, order) * binomial(ny, order);
    if (total <= static_cast<double>(opts.exhaustive_limit)) {
      std::vector<int> r(order);
      std::iota(r.begin(), r.end(), 0);
      do {
        std::vector<int> c(order);
        std::iota(c.begin(), c.end(), 0);
        do visit(r, c);
        while (next_combination(c, ny));
      } while (next_combination(r, nx));
    } else {
      o.sampled = true;
      std::mt19937_64 rng(opts.seed + static_cast<std::uint64_t>(order));
      for (long s = 0; s < opts.sample_count; ++s) {
        const auto r = random_combination(nx, order, rng);
        const auto c = random_combination(ny, order, rng);
        visit(r, c);
      }
    }
    o.violation = o.min_minor < -o.tol;
    report.violation = report.violation || o.violation;
    if (o.min_minor < report.min_minor) {
      report.min_minor = o.min_minor;
      report.min_rows = o.min_rows;
      report.min_cols = o.min_cols;
    }
    report.orders.push_back(std::move(o));
  }
  report.max_order_checked = max_order;
  return report;
}

namespace {

ExtendedReal stencil(const DensitySource& src, double a, int k, double h) {
  const auto f = [&src, a](double offset) { return src.eval_extended(ExtendedReal(a) + offset); };
  switch (k) {
    case 0: return f(0.0);
    case 1: return (f(h) - f(-h)) / (2.0 * h);
    case 2: return (f(h) - f(0.0) * 2.0 + f(-h)) / (h * h);
    case 3: return (f(2.0 * h) - f(h) * 2.0 + f(-h) * 2.0 - f(-2.0 * h)) / (2.0 * h * h * h);
    default: throw Error(ErrorKind::domain_error, "derivative order must be in 0..3");
  }
}

}  // namespace

ExtendedReal central_derivative(const DensitySource& src, double a, int k, double h, double* error_estimate) {
  if (!(h > 0.0)) throw Error(ErrorKind::domain_error, "difference step must be positive");
  const ExtendedReal d1 = stencil(src, a, k, h);
  if (k == 0) {
    if (error_estimate) *error_estimate = 0.0;
    return d1;
  }
  const ExtendedReal d2 = stencil(src, a, k, 2.0 * h);
  const ExtendedReal d4 = stencil(src, a, k, 4.0 * h);
  const double e1 = (d2 - d1).to_double();
  const double e2 = (d4 - d2).to_double();
  // Roundoff of the stencil: working precision of the samples over h^k.
  const double sample_precision = src.value_extended ? 1e-28 : 1e-15;
  const double fscale = std::max(std::abs(d1.to_double()) * std::pow(h, k), std::abs(stencil(src, a, 0, h).to_double()));
  const double noise = 8.0 * sample_precision * std::max(fscale, 1e-300) / std::pow(h, k);
  if (std::max(std::abs(e1), std::abs(e2)) > 10.0 * noise) {
    // Smooth data give e2 / e1 close to 4 (O(h^2) error).
    const double ratio = e2 / (std::abs(e1) > noise ? e1 : std::copysign(noise, e1));
    if (!(ratio > 0.4 && ratio < 40.0))
      throw LocatedError(ErrorKind::non_smooth_point, {a, 0.0},
                         "difference quotients of order " + std::to_string(k) + " fail the Richardson check at " +
                             io::format_double(a));
  }
  if (error_estimate) *error_estimate = std::abs(e1) / 3.0 + noise;
  return d1;
}

TPReport check_derivative_minors(const DensitySource& src, const std::vector<double>& omegas, int n, double h,
                                 double tol) {
  if (n < 1 || n > 4) throw Error(ErrorKind::grid_too_small, "n must be in 1..4");
  if (omegas.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::grid_too_small, "need exactly n points omega_1 > ... > omega_n");
  for (std::size_t i = 1; i < omegas.size(); ++i)
    if (!(omegas[i] < omegas[i - 1])) throw Error(ErrorKind::grid_too_small, "omegas must be strictly decreasing");
  if (!(h > 0.0)) {
    double wmax = 0.0;
    for (double w : omegas) wmax = std::max(wmax, std::abs(w));
    h = 1e-3 * (1.0 + wmax);
  }

  std::vector<std::vector<ExtendedReal>> m(n, std::vector<ExtendedReal>(n));
  std::vector<std::vector<double>> errs(n, std::vector<double>(n, 0.0));
  double fmax = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[i][j] = central_derivative(src, omegas[j], i, h, &errs[i][j]);
      if (i == 0) fmax = std::max(fmax, std::abs(m[i][j].to_double()));
    }
  }

  TPReport report;
  report.min_minor = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<ExtendedReal>> lead(k, std::vector<ExtendedReal>(k));
    double row_bound = 1.0, err_bound = 0.0;
    for (int i = 0; i < k; ++i) {
      double row_max = 0.0, row_err = 0.0;
      for (int j = 0; j < k; ++j) {
        lead[i][j] = m[i][j];
        row_max = std::max(row_max, std::abs(m[i][j].to_double()));
        row_err = std::max(row_err, errs[i][j]);
      }
      // First-order perturbation bound of the determinant.
      err_bound = err_bound * row_max + row_bound * row_err;
      row_bound *= std::max(row_max, 1e-300);
    }
    TPOrderReport o;
    o.order = k;
    o.min_minor = determinant(lead).to_double();
    o.tol = tol >= 0.0 ? tol : 1e-9 * std::pow(fmax, k);
    o.minors_evaluated = 1;
    o.violation = o.min_minor < -o.tol;
    o.min_cols.assign(omegas.begin(), omegas.begin() + k);
    report.differentiation_error = std::max(report.differentiation_error, err_bound);
    report.violation = report.violation || o.violation;
    if (o.min_minor < report.min_minor) {
      report.min_minor = o.min_minor;
      report.min_cols = o.min_cols;
    }
    report.orders.push_back(std::move(o));
  }
  report.max_order_checked = n;
  return report;
}

}  // namespace pfz
