#pragma once

// Immutable scalar expressions of the radial variable `t` and a fixed set of
// named parameters. Expressions can be parsed from a small DSL, printed back,
// evaluated, and differentiated symbolically.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "rellich/error.hpp"

namespace rellich::expr {

enum class Param : std::uint8_t { n, kappa, lambda, r, R, c, k };
inline constexpr std::size_t kParamCount = 7;

std::string_view param_name(Param p);
std::optional<Param> param_from_name(std::string_view name);

/// Parameter values plus the value of the radial variable.
struct Bindings {
  std::array<std::optional<double>, kParamCount> params{};
  double t = 1.0;

  Bindings& set(Param p, double value) {
    params[static_cast<std::size_t>(p)] = value;
    return *this;
  }
  std::optional<double> get(Param p) const { return params[static_cast<std::size_t>(p)]; }
  Bindings at(double radius) const {
    Bindings b = *this;
    b.t = radius;
    return b;
  }
  /// Parameters of `other` that are bound take precedence.
  Bindings merged(const Bindings& other) const;
};

enum class Op : std::uint8_t {
  constant,
  variable,
  parameter,
  // unary
  neg,
  log,
  exp,
  sqrt,
  sinh,
  cosh,
  tanh,
  coth,
  ct,
  // binary
  add,
  sub,
  mul,
  div,
  pow,
  // iterated, depth >= 0
  logk,
  expk,
};

struct Node;

class Expression {
 public:
  /// The zero constant.
  Expression() = default;

  static Expression constant(double value);
  static Expression variable();
  static Expression parameter(Param p);
  static Expression unary(Op op, const Expression& arg);
  static Expression binary(Op op, const Expression& lhs, const Expression& rhs);
  static Expression iterated(Op op, int depth, const Expression& arg);

  Op op() const;
  /// Only meaningful for Op::constant.
  double value() const;
  /// Only meaningful for Op::parameter.
  Param param() const;
  /// Only meaningful for Op::logk / Op::expk.
  int depth() const;
  /// First child (unary, iterated and binary nodes).
  Expression lhs() const;
  /// Second child (binary nodes).
  Expression rhs() const;

  bool is_constant() const { return op() == Op::constant; }
  bool is_constant(double v) const { return is_constant() && value() == v; }

  /// Whether the tree references `t`.
  bool depends_on_t() const;
  bool depends_on(Param p) const;

  const Node* node() const { return node_.get(); }

 private:
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  // Null represents the constant 0.
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::constant;
  double value = 0.0;
  Param param = Param::n;
  int depth = 0;
  Expression a;
  Expression b;
};

Expression parse(std::string_view text);
std::string print(const Expression& e);

/// Throws UnboundParameterError or DomainError; never returns NaN or inf.
double evaluate(const Expression& e, const Bindings& b);

/// d e / d t.
Expression differentiate(const Expression& e);
/// d e / d var where var is "t" or a parameter name.
Expression differentiate(const Expression& e, std::string_view var);

/// |symbolic derivative - central difference| at b.t with step h.
double fd_check(const Expression& e, const Bindings& b, double h);

// Builders. Constant folding and the trivial 0/1 identities are applied.
Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
inline Expression operator+(double a, const Expression& b) { return Expression::constant(a) + b; }
inline Expression operator+(const Expression& a, double b) { return a + Expression::constant(b); }
inline Expression operator-(double a, const Expression& b) { return Expression::constant(a) - b; }
inline Expression operator-(const Expression& a, double b) { return a - Expression::constant(b); }
inline Expression operator*(double a, const Expression& b) { return Expression::constant(a) * b; }
inline Expression operator*(const Expression& a, double b) { return a * Expression::constant(b); }
inline Expression operator/(double a, const Expression& b) { return Expression::constant(a) / b; }
inline Expression operator/(const Expression& a, double b) { return a / Expression::constant(b); }

Expression pow(const Expression& base, const Expression& exponent);
Expression pow(const Expression& base, double exponent);
Expression log(const Expression& e);
Expression exp(const Expression& e);
Expression sqrt(const Expression& e);
Expression sinh(const Expression& e);
Expression cosh(const Expression& e);
Expression tanh(const Expression& e);
Expression coth(const Expression& e);
/// 1/x when kappa = 0, kappa*coth(kappa*x) when kappa > 0.
Expression ct(const Expression& e);
Expression logk(int depth, const Expression& e);
Expression expk(int depth, const Expression& e);

inline Expression t() { return Expression::variable(); }
inline Expression param(Param p) { return Expression::parameter(p); }
inline Expression num(double v) { return Expression::constant(v); }

}  // namespace rellich::expr
