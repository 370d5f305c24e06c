// Recursive-descent parser for the expression DSL:
//
//   expr   := term (("+"|"-") term)* ;
//   term   := factor (("*"|"/") factor)* ;
//   factor := base ("^" factor)? ;
//   base   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")" | "-" base ;

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rellich/expr.hpp"

namespace rellich::expr {

namespace {

struct UnaryFunction {
  std::string_view name;
  Op op;
};

constexpr UnaryFunction kUnary[] = {
    {"log", Op::log},   {"exp", Op::exp},   {"sqrt", Op::sqrt}, {"sinh", Op::sinh},
    {"cosh", Op::cosh}, {"tanh", Op::tanh}, {"coth", Op::coth}, {"ct", Op::ct},
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression parse_all() {
    Expression e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expression term() {
    Expression lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = lhs * factor();
      else if (accept('/'))
        lhs = lhs / factor();
      else
        return lhs;
    }
  }

  Expression factor() {
    Expression b = base();
    if (accept('^')) return pow(b, factor());
    return b;
  }

  Expression base() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return -base();
    }
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;  // the 'e' is not an exponent
    }
    const std::string token(text_.substr(start, pos_ - start));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v))
      fail_at("malformed number '" + token + "'", start);
    return Expression::constant(v);
  }

  std::vector<Expression> arguments(std::string_view name, std::size_t at) {
    std::vector<Expression> args;
    if (!accept('(')) fail_at("function '" + std::string(name) + "' requires an argument list", at);
    args.push_back(expr());
    while (accept(',')) args.push_back(expr());
    expect(')');
    return args;
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "t") return Expression::variable();
    if (name == "pi") return Expression::constant(std::numbers::pi);
    if (name == "e") return Expression::constant(std::numbers::e);
    if (auto p = param_from_name(name)) return Expression::parameter(*p);

    for (const auto& f : kUnary) {
      if (f.name != name) continue;
      auto args = arguments(name, start);
      if (args.size() != 1)
        fail_at("arity mismatch: '" + std::string(name) + "' takes 1 argument, got " +
                    std::to_string(args.size()),
                start);
      return Expression::unary(f.op, args[0]);
    }
    if (name == "logk" || name == "expk") {
      auto args = arguments(name, start);
      if (args.size() != 2)
        fail_at("arity mismatch: '" + std::string(name) + "' takes 2 arguments, got " +
                    std::to_string(args.size()),
                start);
      const Expression& d = args[0];
      if (!d.is_constant() || d.value() < 0 || std::floor(d.value()) != d.value() || d.value() > 64)
        fail_at("iteration depth of '" + std::string(name) + "' must be an integer constant in [0, 64]", start);
      return Expression::iterated(name == "logk" ? Op::logk : Op::expk, static_cast<int>(d.value()), args[1]);
    }
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace rellich::expr
