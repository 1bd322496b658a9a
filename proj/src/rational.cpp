#include "pm/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace pm {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational rational_from_string(const std::string& input) {
  std::string s;
  for (char c : input)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw SyntaxError("empty number", 0);

  bool neg = false;
  std::size_t pos = 0;
  if (s[pos] == '+' || s[pos] == '-') {
    neg = s[pos] == '-';
    ++pos;
  }
  std::string body = s.substr(pos);

  Rational q;
  auto slash = body.find('/');
  auto dot = body.find('.');
  if (slash != std::string::npos) {
    std::string num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw SyntaxError("malformed fraction '" + input + "'", 0);
    q = Rational(Integer(num), Integer(den));
    if (sgn(q.get_den()) == 0) throw SyntaxError("zero denominator in '" + input + "'", 0);
    q.canonicalize();
  } else if (dot != std::string::npos) {
    std::string ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) {
      throw SyntaxError("malformed decimal '" + input + "'", 0);
    }
    Integer den = 1;
    for (std::size_t t = 0; t < fp.size(); ++t) den *= 10;
    q = Rational(Integer(ip) * den + (fp.empty() ? Integer(0) : Integer(fp)), den);
    q.canonicalize();
  } else if (all_digits(body)) {
    q = Rational(Integer(body));
  } else {
    // Last resort: scientific notation like "1e-3"; converted exactly from
    // the binary double (deterministic).
    char* end = nullptr;
    double d = std::strtod(body.c_str(), &end);
    if (end == nullptr || *end != '\0') throw SyntaxError("malformed number '" + input + "'", 0);
    q = Rational(d);
  }
  return neg ? Rational(-q) : q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

double rational_to_double(const Rational& q) { return q.get_d(); }

Integer factorial(long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Integer binomial(long n, long k) {
  if (k < 0 || k > n || n < 0) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw Error("division by zero in Q(i)");
  if (sgn(im) == 0) return {Rational(1) / re, Rational(0)};
  Rational n = norm();
  return {re / n, -im / n};
}

GaussianRational GaussianRational::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  GaussianRational base = *this, acc = 1;
  while (e > 0) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

std::string GaussianRational::str() const {
  auto imag_part = [&](const Rational& v) -> std::string {
    if (v == 1) return "i";
    if (v == -1) return "-i";
    return rational_to_string(v) + "i";
  };
  if (sgn(im) == 0) return rational_to_string(re);
  if (sgn(re) == 0) return imag_part(im);
  std::string s = "(" + rational_to_string(re);
  if (sgn(im) > 0) s += "+";
  s += imag_part(im) + ")";
  return s;
}

GaussianRational gaussian_from_string(const std::string& input) {
  std::string s;
  for (char c : input)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  if (s.empty()) throw SyntaxError("empty complex literal", 0);

  // "a,b" form.
  auto comma = s.find(',');
  if (comma != std::string::npos) {
    return {rational_from_string(s.substr(0, comma)), rational_from_string(s.substr(comma + 1))};
  }

  // Split "a+bi"/"a-bi" at the last sign that is not leading and not part of
  // an exponent ("1e-3").
  if (s.back() == 'i' || s.back() == 'I') {
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t t = body.size(); t-- > 1;) {
      if ((body[t] == '+' || body[t] == '-') && body[t - 1] != 'e' && body[t - 1] != 'E') {
        split = t;
        break;
      }
    }
    if (split == std::string::npos) {
      // Pure imaginary: "i", "-i", "3i", "2/5i".
      if (body.empty() || body == "+") return GaussianRational::i();
      if (body == "-") return {Rational(0), Rational(-1)};
      return {Rational(0), rational_from_string(body)};
    }
    std::string re = body.substr(0, split);
    std::string im = body.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {rational_from_string(re), rational_from_string(im)};
  }
  return {rational_from_string(s), Rational(0)};
}

}  // namespace pm
