#include "pm/parse.hpp"

#include <cctype>

namespace pm {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  OmegaFunction run() {
    OmegaFunction f = expr();
    skip_ws();
    if (pos_ != s_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  OmegaFunction expr() {
    OmegaFunction acc = term();
    while (true) {
      if (consume('+')) {
        acc += term();
      } else if (consume('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  OmegaFunction term() {
    OmegaFunction acc = factor();
    while (true) {
      if (consume('*')) {
        acc *= factor();
      } else if (consume('/')) {
        std::size_t at = pos_;
        OmegaFunction d = factor();
        try {
          acc *= d.reciprocal();
        } catch (const UnrepresentableDenominator&) {
          throw UnrepresentableDenominator("denominator at position " + std::to_string(at) +
                                           " is not monomial*(1-z*w)^k");
        }
      } else {
        return acc;
      }
    }
  }

  OmegaFunction factor() {
    if (consume('-')) return -factor();
    OmegaFunction b = base();
    if (consume('^')) return b.pow(integer());
    return b;
  }

  long integer() {
    skip_ws();
    std::size_t at = pos_;
    bool neg = consume('-');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      throw SyntaxError("expected integer exponent", at);
    }
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1000000) throw SyntaxError("exponent too large", at);
    }
    return neg ? -v : v;
  }

  OmegaFunction base() {
    char c = peek();
    std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      OmegaFunction inner = expr();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (c == 'z') {
      ++pos_;
      return OmegaFunction::z();
    }
    if (c == 'w') {
      ++pos_;
      return OmegaFunction::w();
    }
    if (c == 'i' || c == 'I') {
      ++pos_;
      return OmegaFunction::constant(GaussianRational::i());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    throw SyntaxError(std::string("unexpected character '") + c + "'", at);
  }

  // number := digits ('/' digits | '.' digits)? ('i')?
  OmegaFunction number() {
    std::size_t at = pos_;
    auto digits = [&]() {
      std::string d;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) d += s_[pos_++];
      return d;
    };
    std::string ip = digits();
    std::string text = ip;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      text += "." + digits();
    } else if (pos_ < s_.size() && s_[pos_] == '/') {
      // Only treat '/' as part of the literal when followed by digits and the
      // quotient is immediately a rational constant (e.g. "1/2"); this keeps
      // "1/(1-z*w)" parsing as division of expressions.
      std::size_t save = pos_;
      ++pos_;
      std::string den = digits();
      if (!den.empty()) {
        text += "/" + den;
      } else {
        pos_ = save;
      }
    }
    if (text.empty()) throw SyntaxError("expected number", at);
    Rational q;
    try {
      q = rational_from_string(text);
    } catch (const SyntaxError&) {
      throw SyntaxError("malformed number '" + text + "'", at);
    }
    if (pos_ < s_.size() && (s_[pos_] == 'i' || s_[pos_] == 'I')) {
      ++pos_;
      return OmegaFunction::constant(GaussianRational{Rational(0), q});
    }
    return OmegaFunction::constant(GaussianRational{q});
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

OmegaFunction parse_expression(const std::string& text) { return Parser(text).run(); }

}  // namespace pm
