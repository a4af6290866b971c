#pragma once

#include <gmpxx.h>

#include <complex>
#include <iosfwd>
#include <string>

namespace pkahler {

using Rational = mpq_class;
using Complex = std::complex<double>;

// a + b i with a, b arbitrary-precision rationals.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long re) : re_(re), im_(0) {}  // NOLINT(implicit)
  GaussianRational(Rational re, Rational im = 0);

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  Rational norm2() const { return re_ * re_ + im_ * im_; }
  Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);  // throws on zero

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

  // Canonical literal: "0", "3/2", "-i", "1/2 + 3/4 i", "-1 - 2 i".
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

// Overloads so templated code can treat exact and float scalars alike.
inline GaussianRational conj(const GaussianRational& z) { return z.conj(); }
inline bool is_exact_zero(const GaussianRational& z) { return z.is_zero(); }
inline bool is_exact_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_exact_zero(const Complex& z) { return z == Complex(0.0, 0.0); }
inline Complex to_complex(const GaussianRational& z) { return z.to_complex(); }
inline Complex to_complex(const Complex& z) { return z; }

// i^{p^2} 2^{-p}
GaussianRational sigma(int p);
Complex sigma_f(int p);

// Nearest fraction with denominator at most max_den (continued fractions).
Rational rationalize(double x, long max_den);

}  // namespace pkahler
