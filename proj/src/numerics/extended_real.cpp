#include "pfz/numerics/extended_real.hpp"

#include <array>
#include <cctype>
#include <limits>
#include <stdexcept>

namespace pfz {

namespace {

constexpr double kEps = 4.93038065763132e-32;  // 2^-104

// 1/k! for k = 0..kFactorials-1.
constexpr int kFactorials = 40;

const std::array<ExtendedReal, kFactorials>& inverse_factorials() {
  static const std::array<ExtendedReal, kFactorials> table = [] {
    std::array<ExtendedReal, kFactorials> t{};
    t[0] = 1.0;
    for (int k = 1; k < kFactorials; ++k) t[k] = t[k - 1] / static_cast<double>(k);
    return t;
  }();
  return table;
}

// pi/2 as an unevaluated sum of three doubles for argument reduction.
constexpr double kHalfPi1 = 1.57079632679489656e+00;
constexpr double kHalfPi2 = 6.12323399573676604e-17;
constexpr double kHalfPi3 = -1.49738490485916983e-33;

ExtendedReal exact_product(double a, double b) {
  double p, e;
  eft::two_prod(a, b, p, e);
  return ExtendedReal::from_sum(p, e);
}

// sin and cos of |t| <= pi/4 by Taylor series.
void sincos_reduced(const ExtendedReal& t, ExtendedReal& s, ExtendedReal& c) {
  const auto& inv = inverse_factorials();
  const ExtendedReal t2 = t * t;
  const double thresh = kEps * 1e-2;

  ExtendedReal p = t;
  s = t;
  for (int k = 3; k < kFactorials; k += 2) {
    p = -(p * t2);
    const ExtendedReal term = p * inv[k];
    s += term;
    if (std::abs(term.hi()) < thresh) break;
  }
  p = 1.0;
  c = 1.0;
  for (int k = 2; k < kFactorials; k += 2) {
    p = -(p * t2);
    const ExtendedReal term = p * inv[k];
    c += term;
    if (std::abs(term.hi()) < thresh) break;
  }
}

}  // namespace

namespace xconst {
ExtendedReal pi() { return ExtendedReal::from_sum(3.14159265358979312e+00, 1.22464679914735321e-16); }
ExtendedReal two_pi() {
  return ExtendedReal::from_sum(6.28318530717958623e+00, 2.44929359829470641e-16);
}
ExtendedReal ln2() { return ExtendedReal::from_sum(6.93147180559945286e-01, 2.31904681384629956e-17); }
ExtendedReal sqrt2() {
  return ExtendedReal::from_sum(1.41421356237309515e+00, -9.66729331345291345e-17);
}
}  // namespace xconst

ExtendedReal ExtendedReal::parse(const std::string& text) {
  ExtendedReal r = 0.0;
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  int exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      r = r * 10.0 + static_cast<double>(ch - '0');
      any_digit = true;
      if (seen_point) --exponent;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch == 'e' || ch == 'E') {
      exponent += std::stoi(text.substr(i + 1));
      break;
    } else {
      throw std::invalid_argument("ExtendedReal::parse: bad literal '" + text + "'");
    }
  }
  if (!any_digit) throw std::invalid_argument("ExtendedReal::parse: bad literal '" + text + "'");
  const ExtendedReal scale = pow(ExtendedReal(10.0), exponent < 0 ? -exponent : exponent);
  r = exponent < 0 ? r / scale : r * scale;
  return negative ? -r : r;
}

ExtendedReal sqrt(const ExtendedReal& a) {
  if (a.hi() == 0.0) return 0.0;
  if (a.hi() < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double x = 1.0 / std::sqrt(a.hi());
  const double ax = a.hi() * x;
  const ExtendedReal ax_sq = exact_product(ax, ax);
  return ExtendedReal(ax) + (a - ax_sq).hi() * (x * 0.5);
}

ExtendedReal pow(const ExtendedReal& a, int n) {
  if (n == 0) return 1.0;
  ExtendedReal base = a;
  ExtendedReal result = 1.0;
  unsigned int e = static_cast<unsigned int>(n < 0 ? -n : n);
  while (e) {
    if (e & 1U) result *= base;
    base *= base;
    e >>= 1U;
  }
  return n < 0 ? 1.0 / result : result;
}

ExtendedReal exp(const ExtendedReal& a) {
  if (a.hi() > 709.78) return std::numeric_limits<double>::infinity();
  if (a.hi() < -745.0) return 0.0;
  if (a.hi() == 0.0) return 1.0;

  const double k = std::nearbyint(a.hi() / xconst::ln2().hi());
  // r = (a - k ln2) / 512, so |r| <= 6.8e-4 and nine squarings undo the scaling.
  const ExtendedReal r = ldexp(a - xconst::ln2() * k, -9);

  const auto& inv = inverse_factorials();
  ExtendedReal p = r * r;
  ExtendedReal s = r + ldexp(p, -1);
  for (int i = 3; i < kFactorials; ++i) {
    p *= r;
    const ExtendedReal term = p * inv[i];
    s += term;
    if (std::abs(term.hi()) < kEps * 1e-3) break;
  }
  // expm1 doubling: e^{2r} - 1 = 2s + s^2.
  for (int i = 0; i < 9; ++i) s = ldexp(s, 1) + s * s;
  s = s + 1.0;
  return ldexp(s, static_cast<int>(k));
}

ExtendedReal log(const ExtendedReal& a) {
  if (a.hi() <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (a.hi() == 1.0 && a.lo() == 0.0) return 0.0;
  ExtendedReal x = std::log(a.hi());
  x = x + a * exp(-x) - 1.0;
  return x;
}

void sincos(const ExtendedReal& a, ExtendedReal& s, ExtendedReal& c) {
  if (!a.is_finite()) {
    s = c = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double j = std::nearbyint(a.hi() / kHalfPi1);
  ExtendedReal t = a;
  if (j != 0.0) {
    t = t - exact_product(j, kHalfPi1);
    t = t - exact_product(j, kHalfPi2);
    t = t - j * kHalfPi3;
  }
  ExtendedReal st, ct;
  sincos_reduced(t, st, ct);
  const long quadrant = static_cast<long>(std::fmod(j, 4.0) + 4.0) % 4;
  switch (quadrant) {
    case 0: s = st; c = ct; break;
    case 1: s = ct; c = -st; break;
    case 2: s = -st; c = -ct; break;
    default: s = -ct; c = st; break;
  }
}

ExtendedReal sin(const ExtendedReal& a) {
  ExtendedReal s, c;
  sincos(a, s, c);
  return s;
}

ExtendedReal cos(const ExtendedReal& a) {
  ExtendedReal s, c;
  sincos(a, s, c);
  return c;
}

ExtendedComplex exp(const ExtendedComplex& a) {
  const ExtendedReal mag = exp(a.re);
  if (a.im.hi() == 0.0 && a.im.lo() == 0.0) return {mag, 0.0};
  ExtendedReal s, c;
  sincos(a.im, s, c);
  return {mag * c, mag * s};
}

}  // namespace pfz
