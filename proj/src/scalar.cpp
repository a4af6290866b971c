#include "pkahler/scalar.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace pkahler {

GaussianRational::GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  Rational r = re_ * o.re_ - im_ * o.im_;
  Rational i = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(r);
  im_ = std::move(i);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero Gaussian rational");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  Rational d = o.norm2();
  *this *= o.conj();
  re_ /= d;
  im_ /= d;
  return *this;
}

namespace {

std::string rat_str(const Rational& q) { return q.get_str(); }

}  // namespace

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return rat_str(re_);
  Rational mag = abs(im_);
  std::string ipart = (mag == 1) ? "i" : rat_str(mag) + " i";
  if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + ipart;
  return rat_str(re_) + (sgn(im_) < 0 ? " - " : " + ") + ipart;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.to_string(); }

GaussianRational sigma(int p) {
  if (p < 0) throw std::invalid_argument("sigma: negative degree");
  Rational mag(1);
  mag /= Rational(mpz_class(1) << p);
  // p^2 is 0 mod 4 for even p and 1 mod 4 for odd p
  return (p % 2 == 0) ? GaussianRational(mag, 0) : GaussianRational(0, mag);
}

Complex sigma_f(int p) { return sigma(p).to_complex(); }

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw std::domain_error("rationalize: non-finite value");
  // Stern-Brocot style best approximation via continued fractions.
  bool neg = x < 0;
  double v = std::fabs(x);
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = v;
  for (int it = 0; it < 64; ++it) {
    double a_d = std::floor(r);
    if (a_d > 1e15) break;
    mpz_class a(static_cast<unsigned long>(a_d));
    mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) {
      // semiconvergent check
      mpz_class k = (mpz_class(max_den) - q0) / q1;
      mpz_class ps = k * p1 + p0, qs = k * q1 + q0;
      Rational c1(p1, q1), cs(ps, qs);
      c1.canonicalize();
      cs.canonicalize();
      Rational target(v);
      if (qs > 0 && abs(cs - target) < abs(c1 - target)) {
        p1 = ps;
        q1 = qs;
      }
      break;
    }
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = r - a_d;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  Rational out(p1, q1);
  out.canonicalize();
  return neg ? Rational(-out) : out;
}

}  // namespace pkahler
