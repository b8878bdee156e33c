#pragma once

// Compensated double-double arithmetic.
//
// A value is the unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving about
// 31 significant decimal digits. Ring operations are built from the
// error-free transformations two_sum / two_prod; transcendental functions
// live in extended_real.cpp.

#include <cmath>
#include <complex>
#include <string>

namespace pfz {

namespace eft {

/// s + e == a + b exactly (Knuth).
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

/// Requires |a| >= |b| (Dekker).
inline void quick_two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  e = b - (s - a);
}

/// p + e == a * b exactly.
inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

}  // namespace eft

class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : hi_(v), lo_(0.0) {}  // NOLINT: implicit promotion is intended
  ExtendedReal(int v) : hi_(static_cast<double>(v)), lo_(0.0) {}  // NOLINT

  /// Builds from an arbitrary pair, renormalizing.
  static ExtendedReal from_sum(double a, double b) {
    ExtendedReal r;
    eft::two_sum(a, b, r.hi_, r.lo_);
    return r;
  }

  /// Parses a decimal literal to full double-double accuracy.
  static ExtendedReal parse(const std::string& text);

  double hi() const { return hi_; }
  double lo() const { return lo_; }
  double to_double() const { return hi_ + lo_; }

  bool is_finite() const { return std::isfinite(hi_) && std::isfinite(lo_); }

  ExtendedReal operator-() const { return raw(-hi_, -lo_); }

  friend ExtendedReal operator+(const ExtendedReal& a, const ExtendedReal& b) {
    double s1, s2, t1, t2;
    eft::two_sum(a.hi_, b.hi_, s1, s2);
    eft::two_sum(a.lo_, b.lo_, t1, t2);
    s2 += t1;
    eft::quick_two_sum(s1, s2, s1, s2);
    s2 += t2;
    eft::quick_two_sum(s1, s2, s1, s2);
    return raw(s1, s2);
  }
  friend ExtendedReal operator+(const ExtendedReal& a, double b) {
    double s1, s2;
    eft::two_sum(a.hi_, b, s1, s2);
    s2 += a.lo_;
    eft::quick_two_sum(s1, s2, s1, s2);
    return raw(s1, s2);
  }
  friend ExtendedReal operator+(double a, const ExtendedReal& b) { return b + a; }
  friend ExtendedReal operator-(const ExtendedReal& a, const ExtendedReal& b) { return a + (-b); }
  friend ExtendedReal operator-(const ExtendedReal& a, double b) { return a + (-b); }
  friend ExtendedReal operator-(double a, const ExtendedReal& b) { return (-b) + a; }

  friend ExtendedReal operator*(const ExtendedReal& a, const ExtendedReal& b) {
    double p1, p2;
    eft::two_prod(a.hi_, b.hi_, p1, p2);
    p2 += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    eft::quick_two_sum(p1, p2, p1, p2);
    return raw(p1, p2);
  }
  friend ExtendedReal operator*(const ExtendedReal& a, double b) {
    double p1, p2;
    eft::two_prod(a.hi_, b, p1, p2);
    p2 += a.lo_ * b;
    eft::quick_two_sum(p1, p2, p1, p2);
    return raw(p1, p2);
  }
  friend ExtendedReal operator*(double a, const ExtendedReal& b) { return b * a; }

  friend ExtendedReal operator/(const ExtendedReal& a, const ExtendedReal& b) {
    const double q1 = a.hi_ / b.hi_;
    ExtendedReal r = a - b * q1;
    const double q2 = r.hi_ / b.hi_;
    r = r - b * q2;
    const double q3 = r.hi_ / b.hi_;
    ExtendedReal q;
    eft::quick_two_sum(q1, q2, q.hi_, q.lo_);
    return q + q3;
  }
  friend ExtendedReal operator/(const ExtendedReal& a, double b) { return a / ExtendedReal(b); }
  friend ExtendedReal operator/(double a, const ExtendedReal& b) { return ExtendedReal(a) / b; }

  ExtendedReal& operator+=(const ExtendedReal& o) { return *this = *this + o; }
  ExtendedReal& operator-=(const ExtendedReal& o) { return *this = *this - o; }
  ExtendedReal& operator*=(const ExtendedReal& o) { return *this = *this * o; }
  ExtendedReal& operator/=(const ExtendedReal& o) { return *this = *this / o; }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    return a.hi_ < b.hi_ || (a.hi_ == b.hi_ && a.lo_ < b.lo_);
  }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return !(b < a); }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return !(a < b); }

 private:
  static ExtendedReal raw(double hi, double lo) {
    ExtendedReal r;
    r.hi_ = hi;
    r.lo_ = lo;
    return r;
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline ExtendedReal abs(const ExtendedReal& a) { return a.hi() < 0.0 ? -a : a; }
inline ExtendedReal ldexp(const ExtendedReal& a, int e) {
  return ExtendedReal::from_sum(std::ldexp(a.hi(), e), std::ldexp(a.lo(), e));
}
inline ExtendedReal square(const ExtendedReal& a) { return a * a; }

ExtendedReal sqrt(const ExtendedReal& a);
ExtendedReal exp(const ExtendedReal& a);
ExtendedReal log(const ExtendedReal& a);
ExtendedReal sin(const ExtendedReal& a);
ExtendedReal cos(const ExtendedReal& a);
void sincos(const ExtendedReal& a, ExtendedReal& s, ExtendedReal& c);
ExtendedReal pow(const ExtendedReal& a, int n);

namespace xconst {
ExtendedReal pi();
ExtendedReal two_pi();
ExtendedReal ln2();
ExtendedReal sqrt2();
}  // namespace xconst

/// Complex number with double-double parts. Only the operations the
/// integrators and series need.
struct ExtendedComplex {
  ExtendedReal re;
  ExtendedReal im;

  ExtendedComplex() = default;
  ExtendedComplex(ExtendedReal r, ExtendedReal i = ExtendedReal()) : re(r), im(i) {}  // NOLINT
  explicit ExtendedComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
  double abs() const { return std::hypot(re.to_double(), im.to_double()); }
  ExtendedComplex conj() const { return {re, -im}; }

  friend ExtendedComplex operator+(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ExtendedComplex operator-(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ExtendedComplex operator*(const ExtendedComplex& a, const ExtendedComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ExtendedComplex operator*(const ExtendedComplex& a, const ExtendedReal& s) {
    return {a.re * s, a.im * s};
  }
  friend ExtendedComplex operator/(const ExtendedComplex& a, const ExtendedComplex& b) {
    const ExtendedReal den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
  }
  ExtendedComplex operator-() const { return {-re, -im}; }
  ExtendedComplex& operator+=(const ExtendedComplex& o) { return *this = *this + o; }
  ExtendedComplex& operator*=(const ExtendedComplex& o) { return *this = *this * o; }
};

/// e^{a} for complex a.
ExtendedComplex exp(const ExtendedComplex& a);

}  // namespace pfz
