#pragma once

// Finite-N GUE sampling, a Hermitian eigensolver (Householder reduction and
// implicit QL), Monte Carlo characteristic functions and nearest-neighbor
// spacing statistics.

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pfz/zeros.hpp"

namespace pfz {

struct HermitianMatrix {
  int n = 0;
  /// Row-major n x n entries.
  std::vector<std::complex<double>> entries;

  HermitianMatrix() = default;
  explicit HermitianMatrix(int size);
  static HermitianMatrix diagonal(const std::vector<double>& diag);
  /// Throws Error(domain_error) unless the row-major values form a square
  /// Hermitian matrix to within tol.
  static HermitianMatrix from_entries(int size, std::vector<std::complex<double>> values, double tol = 1e-12);

  std::complex<double>& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
  const std::complex<double>& at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
  std::complex<double> trace() const;
  /// trace(A^2) = sum |a_ij|^2.
  double trace_of_square() const;
  double max_hermitian_defect() const;
};

/// Diagonal N(0,1); real and imaginary parts of off-diagonal entries
/// N(0,1/2), so the density is proportional to exp(-tr A^2 / 2).
HermitianMatrix sample_gue(int n, std::uint64_t seed);
void fill_gue(HermitianMatrix& a, std::mt19937_64& rng);

struct SpectralSample {
  std::vector<double> eigenvalues;
};

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  /// Row-major unitary Q with A = Q T Q^*, filled when requested.
  std::vector<std::complex<double>> q;
};

/// Unitary reduction to a real symmetric tridiagonal T.
Tridiagonal tridiagonalize(const HermitianMatrix& a, bool want_q = false);

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending. Throws
/// Error(non_convergence) after 30 n implicit QL steps.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> offdiag);

SpectralSample eigenvalues(const HermitianMatrix& a);

/// Draws `count` GUE spectra of size n from seed streams (seed, index).
std::vector<SpectralSample> sample_gue_spectra(int n, int count, std::uint64_t seed, int threads = 1);

struct CharFnEstimate {
  std::complex<double> mean;
  /// One-sigma standard error of the complex mean (both components).
  double standard_error = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  /// prod_j p(t_j) = exp(-sum t_j^2 / 2) over the eigenvalues t_j of X.
  std::complex<double> predicted;
  /// |mean - predicted| / standard_error (0 when both vanish).
  double deviation_in_sigma = 0.0;
};

/// Monte Carlo mean of exp(i trace(XA)) over GUE draws A of the size of X.
/// Draws are split into fixed chunks with their own streams, so the result
/// does not depend on the thread count.
CharFnEstimate empirical_char_fn(const HermitianMatrix& x, long samples, std::uint64_t seed, int threads = 1);

enum class SpacingReference { gue_surmise, poisson, spectral };

const char* to_string(SpacingReference ref);
SpacingReference spacing_reference_from_string(const std::string& name);

struct SpacingReport {
  std::vector<double> spacings;
  std::vector<double> bin_edges;
  std::vector<long> counts;
  double ks_distance = 0.0;
  std::string reference;
  long sample_size = 0;
  double mean_spacing = 0.0;
  std::vector<std::string> notes;
};

/// CDF of the GUE Wigner surmise (32/pi^2) s^2 exp(-4 s^2 / pi).
double wigner_surmise_cdf(double s);
/// CDF of the semicircle law on [-2 sqrt n, 2 sqrt n].
double semicircle_cdf(double x, int n);

/// sup |F_n - F| for a sample against a continuous CDF.
double ks_distance(std::vector<double> sample, double (*cdf)(double));
/// Two-sample Kolmogorov-Smirnov distance.
double ks_distance_two_sample(std::vector<double> a, std::vector<double> b);

/// Summarizes spacings already normalized to mean 1: histogram on [0, 4]
/// and KS distance to the reference. `empirical` is required for spectral.
SpacingReport summarize_spacings(std::vector<double> spacings, SpacingReference ref,
                                 const std::vector<double>* empirical = nullptr);

/// Semicircle unfolding of GUE spectra, central bulk_fraction of levels,
/// spacings normalized to mean 1. Throws Error(insufficient_data) below 1000
/// spacings.
SpacingReport spacing_stats(const std::vector<SpectralSample>& samples, double bulk_fraction,
                            SpacingReference ref = SpacingReference::gue_surmise);

/// Spacings of i.i.d. uniform levels on [0, 1], normalized to mean 1.
std::vector<double> poisson_control_spacings(int levels, std::uint64_t seed);

/// Zero gaps unfolded by a centered sliding-window mean (window gaps), then
/// normalized to mean 1. Throws Error(insufficient_data) below 20 zeros.
SpacingReport compare_zero_spacings(const std::vector<double>& zeros, SpacingReference ref,
                                    const std::vector<SpectralSample>* spectra = nullptr, int window = 9);
SpacingReport compare_zero_spacings(const ZeroTable& table, SpacingReference ref,
                                    const std::vector<SpectralSample>* spectra = nullptr, int window = 9);

}  // namespace pfz
