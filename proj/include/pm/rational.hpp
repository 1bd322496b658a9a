#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

#include "pm/errors.hpp"

namespace pm {

using Rational = mpq_class;
using Integer = mpz_class;

// Parses "3", "-7/4", "0.25" (decimals become exact fractions). Throws
// SyntaxError on malformed input.
Rational rational_from_string(const std::string& s);

std::string rational_to_string(const Rational& q);
double rational_to_double(const Rational& q);

Integer factorial(long n);
Integer binomial(long n, long k);  // 0 for k < 0 or k > n

// Exact element of Q(i): re + im*i with arbitrary-precision rational parts.
// This is the coefficient field for every symbolic computation in the
// library; all operations are exact (division included, via the norm).
struct GaussianRational {
  Rational re, im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long v) : re(v), im(0) {}       // NOLINT(google-explicit-constructor)
  GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
  GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  bool is_one() const { return re == 1 && sgn(im) == 0; }

  GaussianRational conj() const { return {re, -im}; }
  Rational norm() const { return re * re + im * im; }  // |.|^2, exact

  GaussianRational inverse() const;
  GaussianRational pow(long e) const;  // negative e allowed for nonzero values

  std::complex<double> to_complex() const {
    return {rational_to_double(re), rational_to_double(im)};
  }

  // Canonical display form: "3/2", "-1", "i", "-2/3i", "(1+1/2i)". The mixed
  // form is parenthesized so printed coefficients re-parse unambiguously.
  std::string str() const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    // Fast path: most structure constants in this library are real.
    if (sgn(a.im) == 0 && sgn(b.im) == 0) return {a.re * b.re, Rational(0)};
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
  }
  GaussianRational& operator+=(const GaussianRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
    return !(a == b);
  }
};

// Parses a complex scalar in the forms accepted for coefficients and CLI
// flags: "2", "-1/3", "0.5", "2+3i", "1/2-1/3i", "i", "-i", "3i", "a,b".
GaussianRational gaussian_from_string(const std::string& s);

}  // namespace pm
