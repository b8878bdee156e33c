#include "pfz/numerics/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "pfz/errors.hpp"

namespace pfz {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double b) { return b <= 0.0 && b == std::floor(b); }

constexpr long kMaxSeriesTerms = 1000000;
constexpr int kGuardTerms = 5;

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw Error(ErrorKind::domain_error, "gamma_fn requires x > 0");
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  const double y = x - 1.0;
  double a = kLanczos[0];
  const double t = y + kLanczosG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (y + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, y + 0.5) * std::exp(-t) * a;
}

std::complex<double> log_gamma(std::complex<double> z) {
  using C = std::complex<double>;
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
      throw Error(ErrorKind::domain_error, "log_gamma pole at non-positive integer");
    // Reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z).
    return std::log(std::numbers::pi) - std::log(std::sin(std::numbers::pi * z)) - log_gamma(1.0 - z);
  }
  const C y = z - 1.0;
  C a = kLanczos[0];
  const C t = y + kLanczosG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (y + static_cast<double>(i));
  return 0.5 * std::log(2.0 * std::numbers::pi) + (y + 0.5) * std::log(t) - t + std::log(a);
}

ExtendedReal gamma_extended(const ExtendedReal& x) {
  if (!(x.hi() > 0.0)) throw Error(ErrorKind::domain_error, "gamma_extended requires x > 0");
  // Bernoulli numbers B_2 .. B_28 as exact rationals.
  static constexpr std::array<std::array<double, 2>, 14> kBernoulli = {{
      {1.0, 6.0}, {-1.0, 30.0}, {1.0, 42.0}, {-1.0, 30.0}, {5.0, 66.0},
      {-691.0, 2730.0}, {7.0, 6.0}, {-3617.0, 510.0}, {43867.0, 798.0},
      {-174611.0, 330.0}, {854513.0, 138.0}, {-236364091.0, 2730.0},
      {8553103.0, 6.0}, {-23749461029.0, 870.0},
  }};
  ExtendedReal shift = 1.0;
  ExtendedReal y = x;
  while (y.hi() < 40.0) {
    shift *= y;
    y += 1.0;
  }
  const ExtendedReal half_log_two_pi = log(xconst::two_pi()) * 0.5;
  ExtendedReal lg = (y - 0.5) * log(y) - y + half_log_two_pi;
  const ExtendedReal inv_y = 1.0 / y;
  const ExtendedReal inv_y2 = inv_y * inv_y;
  ExtendedReal power = inv_y;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double twok = 2.0 * static_cast<double>(k);
    const ExtendedReal b = ExtendedReal(kBernoulli[k - 1][0]) / kBernoulli[k - 1][1];
    lg += b * power / (twok * (twok - 1.0));
    power *= inv_y2;
  }
  return exp(lg) / shift;
}

double hyper0f2(double b1, double b2, double x) {
  if (is_nonpositive_integer(b1) || is_nonpositive_integer(b2))
    throw Error(ErrorKind::domain_error, "hyper0f2 parameters must not be non-positive integers");
  if (x < 0.0) return hyper0f2_extended(b1, b2, x).to_double();
  double term = 1.0;
  double sum = 1.0;
  int guard = 0;
  for (long n = 0; n < kMaxSeriesTerms; ++n) {
    term *= x / ((b1 + n) * (b2 + n) * (n + 1.0));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      if (++guard > kGuardTerms) return sum;
    } else {
      guard = 0;
    }
  }
  throw Error(ErrorKind::non_convergence, "hyper0f2 exceeded 1e6 terms");
}

ExtendedReal hyper0f2_extended(const ExtendedReal& b1, const ExtendedReal& b2,
                               const ExtendedReal& x, double* max_term) {
  if (is_nonpositive_integer(b1.to_double()) || is_nonpositive_integer(b2.to_double()))
    throw Error(ErrorKind::domain_error, "hyper0f2 parameters must not be non-positive integers");
  ExtendedReal term = 1.0;
  ExtendedReal sum = 1.0;
  double biggest = 1.0;
  int guard = 0;
  for (long n = 0; n < kMaxSeriesTerms; ++n) {
    const double nd = static_cast<double>(n);
    term = term * x / ((b1 + nd) * (b2 + nd) * (nd + 1.0));
    sum += term;
    biggest = std::max(biggest, std::abs(term.hi()));
    if (std::abs(term.hi()) < 1e-33 * std::abs(sum.hi())) {
      if (++guard > kGuardTerms) {
        if (max_term) *max_term = biggest;
        return sum;
      }
    } else {
      guard = 0;
    }
  }
  throw Error(ErrorKind::non_convergence, "hyper0f2 exceeded 1e6 terms");
}

}  // namespace pfz
