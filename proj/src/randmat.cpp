#include "pfz/randmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "pfz/errors.hpp"
#include "pfz/parallel.hpp"
#include "pfz/schoenberg.hpp"

namespace pfz {

namespace {

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Kahan-compensated accumulator.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

HermitianMatrix::HermitianMatrix(int size) : n(size), entries(static_cast<std::size_t>(size) * size) {
  if (size < 1) throw Error(ErrorKind::domain_error, "matrix size must be >= 1");
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& diag) {
  HermitianMatrix a(static_cast<int>(diag.size()));
  for (int i = 0; i < a.n; ++i) a.at(i, i) = diag[i];
  return a;
}

HermitianMatrix HermitianMatrix::from_entries(int size, std::vector<std::complex<double>> values, double tol) {
  HermitianMatrix a(size);
  if (values.size() != a.entries.size())
    throw Error(ErrorKind::domain_error, "expected " + std::to_string(a.entries.size()) + " entries");
  a.entries = std::move(values);
  if (a.max_hermitian_defect() > tol) throw Error(ErrorKind::domain_error, "matrix is not Hermitian");
  for (int i = 0; i < size; ++i) a.at(i, i).imag(0.0);
  return a;
}

std::complex<double> HermitianMatrix::trace() const {
  std::complex<double> t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i);
  return t;
}

double HermitianMatrix::trace_of_square() const {
  double t = 0.0;
  for (const auto& v : entries) t += std::norm(v);
  return t;
}

double HermitianMatrix::max_hermitian_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

void fill_gue(HermitianMatrix& a, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double half = std::sqrt(0.5);
  for (int i = 0; i < a.n; ++i) {
    a.at(i, i) = normal(rng);
    for (int j = i + 1; j < a.n; ++j) {
      const double re = half * normal(rng);
      const double im = half * normal(rng);
      a.at(i, j) = {re, im};
      a.at(j, i) = {re, -im};
    }
  }
}

HermitianMatrix sample_gue(int n, std::uint64_t seed) {
  HermitianMatrix a(n);
  std::mt19937_64 rng(seed);
  fill_gue(a, rng);
  return a;
}

Tridiagonal tridiagonalize(const HermitianMatrix& input, bool want_q) {
  const int n = input.n;
  std::vector<std::complex<double>> a = input.entries;
  auto el = [&](int i, int j) -> std::complex<double>& { return a[static_cast<std::size_t>(i) * n + j]; };
  std::vector<std::complex<double>> q;
  if (want_q) {
    q.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  std::vector<std::complex<double>> sub(n > 1 ? n - 1 : 0);
  std::vector<std::complex<double>> v(n), p(n);

  for (int k = 0; k + 1 < n; ++k) {
    const int m = n - k - 1;  // length of the column below the diagonal
    double tail = 0.0;
    for (int i = k + 2; i < n; ++i) tail += std::norm(el(i, k));
    const std::complex<double> x0 = el(k + 1, k);
    if (tail == 0.0) {
      sub[k] = x0;
      continue;
    }
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const std::complex<double> phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : std::complex<double>(1.0);
    const std::complex<double> alpha = -phase * xnorm;
    for (int i = 0; i < m; ++i) v[i] = el(k + 1 + i, k);
    v[0] -= alpha;
    double vnorm = 0.0;
    for (int i = 0; i < m; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    for (int i = 0; i < m; ++i) v[i] /= vnorm;

    // B <- H B H with H = I - 2 v v^*, written as B - 2 (v w^* + w v^*).
    for (int i = 0; i < m; ++i) {
      std::complex<double> s = 0.0;
      for (int j = 0; j < m; ++j) s += el(k + 1 + i, k + 1 + j) * v[j];
      p[i] = s;
    }
    std::complex<double> kk = 0.0;
    for (int i = 0; i < m; ++i) kk += std::conj(v[i]) * p[i];
    for (int i = 0; i < m; ++i) p[i] -= kk.real() * v[i];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        el(k + 1 + i, k + 1 + j) -= 2.0 * (v[i] * std::conj(p[j]) + p[i] * std::conj(v[j]));
    sub[k] = alpha;
    el(k + 1, k) = alpha;
    el(k, k + 1) = std::conj(alpha);
    for (int i = k + 2; i < n; ++i) el(i, k) = el(k, i) = 0.0;

    if (want_q) {
      for (int r = 0; r < n; ++r) {
        std::complex<double> s = 0.0;
        for (int j = 0; j < m; ++j) s += q[static_cast<std::size_t>(r) * n + k + 1 + j] * v[j];
        for (int j = 0; j < m; ++j) q[static_cast<std::size_t>(r) * n + k + 1 + j] -= 2.0 * s * std::conj(v[j]);
      }
    }
  }

  // A diagonal unitary similarity makes the off-diagonal real and nonnegative.
  Tridiagonal t;
  t.diag.resize(n);
  t.offdiag.resize(sub.size());
  std::complex<double> d = 1.0;
  std::vector<std::complex<double>> phases(n, 1.0);
  for (int k = 0; k < n; ++k) {
    t.diag[k] = el(k, k).real();
    if (k + 1 < n) {
      t.offdiag[k] = std::abs(sub[k]);
      if (t.offdiag[k] > 0.0) d *= sub[k] / t.offdiag[k];
      phases[k + 1] = d;
    }
  }
  if (want_q) {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) q[static_cast<std::size_t>(r) * n + c] *= phases[c];
    t.q = std::move(q);
  }
  return t;
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> offdiag) {
  const int n = static_cast<int>(d.size());
  std::vector<double> e(n, 0.0);
  std::copy(offdiag.begin(), offdiag.end(), e.begin());
  const double eps = std::numeric_limits<double>::epsilon();
  long steps = 0;
  const long cap = 30L * n;
  for (int l = 0; l < n; ++l) {
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++steps > cap)
        throw Error(ErrorKind::non_convergence, "implicit QL did not converge in " + std::to_string(cap) + " steps");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i;
      bool underflow = false;
      for (i = m - 1; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

SpectralSample eigenvalues(const HermitianMatrix& a) {
  const Tridiagonal t = tridiagonalize(a);
  return {tridiagonal_eigenvalues(t.diag, t.offdiag)};
}

std::vector<SpectralSample> sample_gue_spectra(int n, int count, std::uint64_t seed, int threads) {
  if (count < 0) throw Error(ErrorKind::domain_error, "sample count must be >= 0");
  return parallel_map(static_cast<std::size_t>(count), threads, [&](std::size_t i) {
    std::mt19937_64 rng = stream(seed, i);
    HermitianMatrix a(n);
    fill_gue(a, rng);
    return eigenvalues(a);
  });
}

CharFnEstimate empirical_char_fn(const HermitianMatrix& x, long samples, std::uint64_t seed, int threads) {
  if (samples < 2) throw Error(ErrorKind::domain_error, "need at least 2 samples");
  if (x.max_hermitian_defect() > 1e-12) throw Error(ErrorKind::domain_error, "X must be Hermitian");
  struct Entry {
    int i, j;
    std::complex<double> value;
  };
  std::vector<Entry> support;
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      if (x.at(i, j) != 0.0) support.push_back({i, j, x.at(i, j)});

  struct Sums {
    Kahan re, im, re2, im2;
    long count = 0;
  };
  const long chunk = 4096;
  const long chunks = (samples + chunk - 1) / chunk;
  const std::vector<Sums> parts = parallel_map(static_cast<std::size_t>(chunks), threads, [&](std::size_t c) {
    std::mt19937_64 rng = stream(seed, c);
    HermitianMatrix a(x.n);
    Sums s;
    const long todo = std::min(chunk, samples - static_cast<long>(c) * chunk);
    for (long k = 0; k < todo; ++k) {
      fill_gue(a, rng);
      double tr = 0.0;  // trace(XA) is real for Hermitian X and A
      for (const Entry& e : support) tr += (e.value * a.at(e.j, e.i)).real();
      const double cs = std::cos(tr), sn = std::sin(tr);
      s.re.add(cs);
      s.im.add(sn);
      s.re2.add(cs * cs);
      s.im2.add(sn * sn);
      ++s.count;
    }
    return s;
  });
  Kahan re, im, re2, im2;
  for (const Sums& s : parts) {
    re.add(s.re.sum);
    im.add(s.im.sum);
    re2.add(s.re2.sum);
    im2.add(s.im2.sum);
  }
  const double count = static_cast<double>(samples);
  CharFnEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.mean = {re.sum / count, im.sum / count};
  const double var = std::max(0.0, re2.sum / count - out.mean.real() * out.mean.real()) +
                     std::max(0.0, im2.sum / count - out.mean.imag() * out.mean.imag());
  out.standard_error = std::sqrt(var / (count - 1.0));
  out.predicted = 1.0;
  const SchoenbergParams gue = SchoenbergParams::gue();
  for (double t : eigenvalues(x).eigenvalues) out.predicted *= eval_p(gue, t);
  const double gap = std::abs(out.mean - out.predicted);
  out.deviation_in_sigma = out.standard_error > 0.0 ? gap / out.standard_error
                           : gap == 0.0              ? 0.0
                                                     : std::numeric_limits<double>::infinity();
  return out;
}

const char* to_string(SpacingReference ref) {
  switch (ref) {
    case SpacingReference::gue_surmise: return "gue";
    case SpacingReference::poisson: return "poisson";
    case SpacingReference::spectral: return "spectral";
  }
  return "gue";
}

SpacingReference spacing_reference_from_string(const std::string& name) {
  if (name == "gue" || name == "gue_surmise") return SpacingReference::gue_surmise;
  if (name == "poisson") return SpacingReference::poisson;
  if (name == "spectral") return SpacingReference::spectral;
  throw Error(ErrorKind::invalid_spec, "unknown spacing reference '" + name + "'");
}

double wigner_surmise_cdf(double s) {
  if (s <= 0.0) return 0.0;
  const double pi = std::numbers::pi;
  return std::erf(2.0 * s / std::sqrt(pi)) - 4.0 * s / pi * std::exp(-4.0 * s * s / pi);
}

double semicircle_cdf(double x, int n) {
  const double r = 2.0 * std::sqrt(static_cast<double>(n));
  const double y = std::clamp(x / r, -1.0, 1.0);
  return 0.5 + (y * std::sqrt(1.0 - y * y) + std::asin(y)) / std::numbers::pi;
}

namespace {

double poisson_cdf(double s) { return s <= 0.0 ? 0.0 : -std::expm1(-s); }

void normalize_mean(std::vector<double>& s) {
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  if (!(mean > 0.0)) throw Error(ErrorKind::insufficient_data, "spacings have zero mean");
  for (double& v : s) v /= mean;
}

}  // namespace

double ks_distance(std::vector<double> sample, double (*cdf)(double)) {
  if (sample.empty()) throw Error(ErrorKind::insufficient_data, "empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::insufficient_data, "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

SpacingReport summarize_spacings(std::vector<double> spacings, SpacingReference ref,
                                 const std::vector<double>* empirical) {
  SpacingReport r;
  r.reference = to_string(ref);
  r.sample_size = static_cast<long>(spacings.size());
  r.mean_spacing = std::accumulate(spacings.begin(), spacings.end(), 0.0) / static_cast<double>(spacings.size());
  const int bins = 40;
  const double width = 0.1;
  for (int k = 0; k <= bins; ++k) r.bin_edges.push_back(k * width);
  r.counts.assign(bins, 0);
  for (double s : spacings) ++r.counts[std::min(bins - 1, static_cast<int>(s / width))];
  switch (ref) {
    case SpacingReference::gue_surmise: r.ks_distance = ks_distance(spacings, wigner_surmise_cdf); break;
    case SpacingReference::poisson: r.ks_distance = ks_distance(spacings, poisson_cdf); break;
    case SpacingReference::spectral:
      if (!empirical) throw Error(ErrorKind::invalid_spec, "the spectral reference needs spectra");
      r.ks_distance = ks_distance_two_sample(spacings, *empirical);
      break;
  }
  r.notes.push_back("last histogram bin includes spacings >= 4");
  r.spacings = std::move(spacings);
  return r;
}

SpacingReport spacing_stats(const std::vector<SpectralSample>& samples, double bulk_fraction, SpacingReference ref) {
  if (!(bulk_fraction > 0.0 && bulk_fraction <= 1.0))
    throw Error(ErrorKind::domain_error, "bulk_fraction must lie in (0, 1]");
  if (samples.empty()) throw Error(ErrorKind::insufficient_data, "no spectra");
  const std::size_t n = samples.front().eigenvalues.size();
  const double lo = 0.5 * (1.0 - bulk_fraction), hi = 0.5 * (1.0 + bulk_fraction);
  std::vector<double> spacings;
  for (const SpectralSample& s : samples) {
    if (s.eigenvalues.size() != n) throw Error(ErrorKind::domain_error, "spectra must share the same size");
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (double lambda : s.eigenvalues) {
      const double f = semicircle_cdf(lambda, static_cast<int>(n));
      if (f < lo || f > hi) continue;
      const double unfolded = static_cast<double>(n) * f;
      if (!std::isnan(previous)) spacings.push_back(unfolded - previous);
      previous = unfolded;
    }
  }
  if (spacings.size() < 1000)
    throw Error(ErrorKind::insufficient_data, std::to_string(spacings.size()) + " spacings, need >= 1000");
  normalize_mean(spacings);
  if (ref == SpacingReference::spectral) throw Error(ErrorKind::invalid_spec, "spectra cannot be their own reference");
  SpacingReport r = summarize_spacings(std::move(spacings), ref);
  r.notes.push_back("semicircle unfolding on [-2 sqrt n, 2 sqrt n], n = " + std::to_string(n) +
                    ", bulk fraction " + std::to_string(bulk_fraction));
  return r;
}

std::vector<double> poisson_control_spacings(int levels, std::uint64_t seed) {
  if (levels < 3) throw Error(ErrorKind::insufficient_data, "need at least 3 levels");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> x(levels);
  for (double& v : x) v = uniform(rng);
  std::sort(x.begin(), x.end());
  std::vector<double> s;
  for (int i = 1; i < levels; ++i) s.push_back(x[i] - x[i - 1]);
  normalize_mean(s);
  return s;
}

SpacingReport compare_zero_spacings(const std::vector<double>& zeros, SpacingReference ref,
                                    const std::vector<SpectralSample>* spectra, int window) {
  if (zeros.size() < 20)
    throw Error(ErrorKind::insufficient_data, std::to_string(zeros.size()) + " zeros, need >= 20");
  if (window < 1) throw Error(ErrorKind::domain_error, "window must be >= 1");
  std::vector<double> z = zeros;
  std::sort(z.begin(), z.end());
  std::vector<double> gaps;
  for (std::size_t i = 1; i < z.size(); ++i) gaps.push_back(z[i] - z[i - 1]);
  const int count = static_cast<int>(gaps.size());
  const int w = std::min(window, count);
  std::vector<double> unfolded(count);
  for (int i = 0; i < count; ++i) {
    const int start = std::clamp(i - w / 2, 0, count - w);
    const double local = std::accumulate(gaps.begin() + start, gaps.begin() + start + w, 0.0) / w;
    unfolded[i] = gaps[i] / local;
  }
  normalize_mean(unfolded);
  std::vector<double> empirical;
  if (ref == SpacingReference::spectral) {
    if (!spectra) throw Error(ErrorKind::invalid_spec, "the spectral reference needs spectra");
    empirical = spacing_stats(*spectra, 0.5).spacings;
  }
  SpacingReport r = summarize_spacings(std::move(unfolded), ref, ref == SpacingReference::spectral ? &empirical : nullptr);
  r.notes.push_back("sliding-window unfolding over " + std::to_string(w) + " gaps");
  r.notes.push_back("small sample: " + std::to_string(count) + " gaps; KS sampling noise is about " +
                    std::to_string(1.36 / std::sqrt(static_cast<double>(count))));
  return r;
}

SpacingReport compare_zero_spacings(const ZeroTable& table, SpacingReference ref,
                                    const std::vector<SpectralSample>* spectra, int window) {
  return compare_zero_spacings(table.locations(), ref, spectra, window);
}

}  // namespace pfz
