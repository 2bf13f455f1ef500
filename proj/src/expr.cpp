#include "mats/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace mats {

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("expression error at position " + std::to_string(pos) + ": " + what +
                      " in \"" + s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool eat_word(const char* w) {
    skip_ws();
    const size_t n = std::strlen(w);
    if (s.compare(pos, n, w) != 0) return false;
    // must not be followed by an identifier character
    if (pos + n < s.size() &&
        (std::isalnum(static_cast<unsigned char>(s[pos + n])) || s[pos + n] == '_'))
      return false;
    pos += n;
    return true;
  }

  ScalarFn expr() {
    ScalarFn lhs = term();
    for (;;) {
      if (eat('+')) {
        ScalarFn rhs = term();
        lhs = [lhs, rhs](const Vec2& x) { return lhs(x) + rhs(x); };
      } else if (eat('-')) {
        ScalarFn rhs = term();
        lhs = [lhs, rhs](const Vec2& x) { return lhs(x) - rhs(x); };
      } else {
        return lhs;
      }
    }
  }

  ScalarFn term() {
    ScalarFn lhs = factor();
    for (;;) {
      if (eat('*')) {
        ScalarFn rhs = factor();
        lhs = [lhs, rhs](const Vec2& x) { return lhs(x) * rhs(x); };
      } else if (eat('/')) {
        ScalarFn rhs = factor();
        lhs = [lhs, rhs](const Vec2& x) { return lhs(x) / rhs(x); };
      } else {
        return lhs;
      }
    }
  }

  // unary minus binds looser than '^': -x1^2 is -(x1^2)
  ScalarFn factor() {
    if (eat('-')) {
      ScalarFn v = factor();
      return [v](const Vec2& x) { return -v(x); };
    }
    ScalarFn base = primary();
    if (eat('^')) {
      ScalarFn e = factor();  // right associative
      return [base, e](const Vec2& x) { return std::pow(base(x), e(x)); };
    }
    return base;
  }

  ScalarFn call(double (*fn)(double)) {
    skip_ws();
    if (!eat('(')) fail("expected '(' after function name");
    ScalarFn a = expr();
    if (!eat(')')) fail("expected ')'");
    return [fn, a](const Vec2& x) { return fn(a(x)); };
  }

  ScalarFn primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of expression");

    if (s[pos] == '(') {
      ++pos;
      ScalarFn a = expr();
      if (!eat(')')) fail("expected ')'");
      return a;
    }
    // the literal token |x|^2
    if (s.compare(pos, 5, "|x|^2") == 0) {
      pos += 5;
      return [](const Vec2& x) { return x.squaredNorm(); };
    }
    if (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.') {
      size_t end = 0;
      double v = 0.0;
      try {
        v = std::stod(s.substr(pos), &end);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos += end;
      return [v](const Vec2&) { return v; };
    }
    if (eat_word("x1")) return [](const Vec2& x) { return x.x(); };
    if (eat_word("x2")) return [](const Vec2& x) { return x.y(); };
    if (eat_word("r2")) return [](const Vec2& x) { return x.squaredNorm(); };
    if (eat_word("pi")) return [](const Vec2&) { return M_PI; };
    if (eat_word("exp")) return call(std::exp);
    if (eat_word("sqrt")) return call(std::sqrt);
    if (eat_word("abs")) return call(std::fabs);
    if (eat_word("log")) return call(std::log);
    if (eat_word("sin")) return call(std::sin);
    if (eat_word("cos")) return call(std::cos);
    fail("unexpected token");
  }
};

}  // namespace

ScalarFn parse_expression(const std::string& text) {
  Parser p(text);
  ScalarFn f = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return f;
}

}  // namespace mats
