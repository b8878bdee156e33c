#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pfz/errors.hpp"
#include "pfz/randmat.hpp"

using namespace pfz;

namespace {

using Complex = std::complex<double>;
using Dense = std::vector<Complex>;

Dense multiply(const Dense& a, const Dense& b, int n, bool conj_b_transposed = false) {
  Dense c(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const Complex aik = a[i * n + k];
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * (conj_b_transposed ? std::conj(b[j * n + k]) : b[k * n + j]);
    }
  return c;
}

// Random unitary from Gram-Schmidt QR of a complex Gaussian matrix.
Dense random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Dense q(static_cast<std::size_t>(n) * n);
  for (auto& v : q) v = {normal(rng), normal(rng)};
  for (int c = 0; c < n; ++c) {
    for (int p = 0; p < c; ++p) {
      Complex dot = 0.0;
      for (int r = 0; r < n; ++r) dot += std::conj(q[r * n + p]) * q[r * n + c];
      for (int r = 0; r < n; ++r) q[r * n + c] -= dot * q[r * n + p];
    }
    double norm = 0.0;
    for (int r = 0; r < n; ++r) norm += std::norm(q[r * n + c]);
    for (int r = 0; r < n; ++r) q[r * n + c] /= std::sqrt(norm);
  }
  return q;
}

}  // namespace

TEST_CASE("GUE entry statistics") {
  std::mt19937_64 rng(11);
  HermitianMatrix a(3);
  double sum = 0.0, sum2 = 0.0, off2 = 0.0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    fill_gue(a, rng);
    sum += a.at(0, 0).real();
    sum2 += a.at(0, 0).real() * a.at(0, 0).real();
    off2 += a.at(0, 1).real() * a.at(0, 1).real();
  }
  CHECK(std::abs(sum / draws) < 0.01);
  CHECK(sum2 / draws == doctest::Approx(1.0).epsilon(0.02));
  CHECK(off2 / draws == doctest::Approx(0.5).epsilon(0.02));
  CHECK(a.max_hermitian_defect() == 0.0);

  const HermitianMatrix one = sample_gue(1, 5);
  CHECK(one.n == 1);
  CHECK(one.at(0, 0).imag() == 0.0);
  CHECK(sample_gue(7, 99).entries == sample_gue(7, 99).entries);
  CHECK(sample_gue(7, 99).entries != sample_gue(7, 100).entries);
}

TEST_CASE("eigenvalue examples") {
  CHECK(eigenvalues(HermitianMatrix::diagonal({3.0, 1.0, 2.0})).eigenvalues == std::vector<double>{1.0, 2.0, 3.0});
  const auto swap = eigenvalues(HermitianMatrix::from_entries(2, {0.0, 1.0, 1.0, 0.0})).eigenvalues;
  CHECK(swap[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(swap[1] == doctest::Approx(1.0).epsilon(1e-15));
  // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
  const auto c = eigenvalues(HermitianMatrix::from_entries(2, {2.0, Complex(0, 1), Complex(0, -1), 2.0})).eigenvalues;
  CHECK(c[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c[1] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(HermitianMatrix::from_entries(2, {0.0, 1.0, 2.0, 0.0}), Error);
}

TEST_CASE("trace identities") {
  for (int n : {2, 5, 50, 120}) {
    const HermitianMatrix a = sample_gue(n, 1000 + n);
    const auto ev = eigenvalues(a).eigenvalues;
    double s1 = 0.0, s2 = 0.0;
    for (double l : ev) {
      s1 += l;
      s2 += l * l;
    }
    const double scale = std::sqrt(a.trace_of_square());
    CHECK(std::abs(s1 - a.trace().real()) <= 1e-8 * n * scale);
    CHECK(std::abs(s2 - a.trace_of_square()) <= 1e-8 * n * scale * scale);
    CHECK(std::is_sorted(ev.begin(), ev.end()));
  }
}

TEST_CASE("tridiagonal reduction round trip") {
  const int n = 12;
  const HermitianMatrix a = sample_gue(n, 42);
  const Tridiagonal t = tridiagonalize(a, true);
  Dense tri(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    tri[i * n + i] = t.diag[i];
    if (i + 1 < n) tri[i * n + i + 1] = tri[(i + 1) * n + i] = t.offdiag[i];
  }
  const Dense back = multiply(multiply(t.q, tri, n), t.q, n, true);
  double worst = 0.0;
  for (std::size_t k = 0; k < back.size(); ++k) worst = std::max(worst, std::abs(back[k] - a.entries[k]));
  CHECK(worst < 1e-12 * n);
  const HermitianMatrix rebuilt = HermitianMatrix::from_entries(n, back, 1e-12);
  CHECK(rebuilt.max_hermitian_defect() < 1e-12);
}

TEST_CASE("unitary invariance of the spectrum") {
  const int n = 30;
  const HermitianMatrix a = sample_gue(n, 8);
  const Dense q = random_unitary(n, 9);
  Dense rotated = multiply(multiply(q, a.entries, n), q, n, true);
  const HermitianMatrix b = HermitianMatrix::from_entries(n, rotated, 1e-10);
  const auto ea = eigenvalues(a).eigenvalues;
  const auto eb = eigenvalues(b).eigenvalues;
  for (int i = 0; i < n; ++i) CHECK(std::abs(ea[i] - eb[i]) < 1e-8);
}

TEST_CASE("QL with negligible couplings and empty input") {
  const auto ev = tridiagonal_eigenvalues({1.0, 1.0, 1.0}, {1e-300, 1e-300});
  CHECK(ev.size() == 3);
  CHECK(tridiagonal_eigenvalues({}, {}).empty());
}

TEST_CASE("empirical characteristic function") {
  HermitianMatrix e11(10);
  e11.at(0, 0) = 1.0;
  const CharFnEstimate a = empirical_char_fn(e11, 100000, 17);
  CHECK(a.predicted.real() == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(a.deviation_in_sigma < 3.0);

  const CharFnEstimate b = empirical_char_fn(HermitianMatrix::diagonal({1.0, 1.0}), 100000, 18);
  CHECK(b.predicted.real() == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(b.deviation_in_sigma < 3.0);

  const CharFnEstimate zero = empirical_char_fn(HermitianMatrix(4), 1000, 1);
  CHECK(zero.mean == Complex(1.0, 0.0));
  CHECK(zero.standard_error == 0.0);
  CHECK(zero.deviation_in_sigma == 0.0);

  const CharFnEstimate threaded = empirical_char_fn(e11, 20000, 17, 3);
  const CharFnEstimate serial = empirical_char_fn(e11, 20000, 17, 1);
  CHECK(threaded.mean == serial.mean);
}

TEST_CASE("Monte Carlo rate") {
  HermitianMatrix x(3);
  x.at(0, 1) = Complex(0.5, 0.5);
  x.at(1, 0) = Complex(0.5, -0.5);
  const double small = empirical_char_fn(x, 10000, 3).standard_error;
  const double large = empirical_char_fn(x, 40000, 4).standard_error;
  CHECK(small / large == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("distribution functions") {
  CHECK(wigner_surmise_cdf(0.0) == 0.0);
  CHECK(wigner_surmise_cdf(20.0) == doctest::Approx(1.0));
  // Mean of the surmise is 1: integral of 1 - F.
  double mean = 0.0;
  for (int k = 0; k < 40000; ++k) mean += (1.0 - wigner_surmise_cdf((k + 0.5) * 1e-4)) * 1e-4;
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(semicircle_cdf(0.0, 50) == doctest::Approx(0.5));
  CHECK(semicircle_cdf(100.0, 50) == 1.0);
  CHECK(semicircle_cdf(-100.0, 50) == 0.0);
  CHECK(ks_distance_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_distance_two_sample({1, 2}, {3, 4}) == 1.0);
}

TEST_CASE("spacing statistics") {
  const auto spectra = sample_gue_spectra(100, 40, 7);
  const SpacingReport r = spacing_stats(spectra, 0.5);
  CHECK(r.sample_size >= 1000);
  CHECK(r.mean_spacing == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.ks_distance < 0.06);
  for (double s : r.spacings) CHECK(s >= 0.0);

  const SpacingReport poisson = summarize_spacings(poisson_control_spacings(5000, 3), SpacingReference::gue_surmise);
  CHECK(poisson.ks_distance > 0.15);
  CHECK(summarize_spacings(poisson_control_spacings(5000, 3), SpacingReference::poisson).ks_distance < 0.05);

  CHECK_THROWS_AS(spacing_stats(sample_gue_spectra(20, 3, 1), 0.5), Error);
  CHECK(sample_gue_spectra(20, 4, 9, 1)[3].eigenvalues == sample_gue_spectra(20, 4, 9, 3)[3].eigenvalues);
}

TEST_CASE("zero spacing comparison") {
  std::vector<double> ladder;
  for (int k = 1; k <= 50; ++k) ladder.push_back(k);
  const SpacingReport r = compare_zero_spacings(ladder, SpacingReference::poisson);
  for (double s : r.spacings) CHECK(s == doctest::Approx(1.0));
  CHECK(r.ks_distance > 0.6);
  CHECK_THROWS_AS(compare_zero_spacings(std::vector<double>{2.449}, SpacingReference::poisson), Error);
  const auto spectra = sample_gue_spectra(100, 30, 2);
  const SpacingReport s = compare_zero_spacings(ladder, SpacingReference::spectral, &spectra);
  CHECK(s.ks_distance > 0.3);
  CHECK(spacing_reference_from_string("gue") == SpacingReference::gue_surmise);
  CHECK_THROWS_AS(spacing_reference_from_string("goe"), Error);
}
