#include <cmath>
#include <cstdio>
#include <utility>

#include "eval_impl.hpp"
#include "rellich/expr.hpp"

namespace rellich {

std::string DomainError::format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace rellich

namespace rellich::expr {

namespace {

constexpr std::array<std::string_view, kParamCount> kParamNames = {"n", "kappa", "lambda", "r", "R", "c", "k"};

bool is_unary(Op op) { return op >= Op::neg && op <= Op::ct; }
bool is_binary(Op op) { return op >= Op::add && op <= Op::pow; }

std::shared_ptr<Node> make_node(Op op) {
  auto n = std::make_shared<Node>();
  n->op = op;
  return n;
}

// Folds a parameter-free, t-free tree; returns nullopt when evaluation fails.
std::optional<double> try_fold(const Expression& e) {
  try {
    Bindings empty;
    return evaluate(e, empty);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string_view param_name(Param p) { return kParamNames[static_cast<std::size_t>(p)]; }

std::optional<Param> param_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kParamCount; ++i)
    if (kParamNames[i] == name) return static_cast<Param>(i);
  return std::nullopt;
}

Bindings Bindings::merged(const Bindings& other) const {
  Bindings out = *this;
  for (std::size_t i = 0; i < kParamCount; ++i)
    if (other.params[i]) out.params[i] = other.params[i];
  return out;
}

Op Expression::op() const { return node_ ? node_->op : Op::constant; }
double Expression::value() const { return node_ ? node_->value : 0.0; }
Param Expression::param() const { return node_ ? node_->param : Param::n; }
int Expression::depth() const { return node_ ? node_->depth : 0; }
Expression Expression::lhs() const { return node_ ? node_->a : Expression(); }
Expression Expression::rhs() const { return node_ ? node_->b : Expression(); }

bool Expression::depends_on_t() const {
  if (!node_) return false;
  switch (node_->op) {
    case Op::constant:
    case Op::parameter:
      return false;
    case Op::variable:
      return true;
    default:
      return node_->a.depends_on_t() || node_->b.depends_on_t();
  }
}

bool Expression::depends_on(Param p) const {
  if (!node_) return false;
  switch (node_->op) {
    case Op::constant:
    case Op::variable:
      return false;
    case Op::parameter:
      return node_->param == p;
    case Op::ct:
      return p == Param::kappa || node_->a.depends_on(p);
    default:
      return node_->a.depends_on(p) || node_->b.depends_on(p);
  }
}

Expression Expression::constant(double value) {
  if (value == 0.0) return Expression();
  auto n = make_node(Op::constant);
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable() { return Expression(make_node(Op::variable)); }

Expression Expression::parameter(Param p) {
  auto n = make_node(Op::parameter);
  n->param = p;
  return Expression(std::move(n));
}

Expression Expression::unary(Op op, const Expression& arg) {
  if (!is_unary(op)) throw InvalidArgument("not a unary operator");
  if (op == Op::neg) {
    if (arg.is_constant()) return constant(-arg.value());
    if (arg.op() == Op::neg) return arg.lhs();
  }
  auto n = make_node(op);
  n->a = arg;
  Expression e(std::move(n));
  if (arg.is_constant() && op != Op::ct)
    if (auto v = try_fold(e)) return constant(*v);
  return e;
}

Expression Expression::binary(Op op, const Expression& lhs, const Expression& rhs) {
  if (!is_binary(op)) throw InvalidArgument("not a binary operator");
  switch (op) {
    case Op::add:
      if (lhs.is_constant(0)) return rhs;
      if (rhs.is_constant(0)) return lhs;
      break;
    case Op::sub:
      if (rhs.is_constant(0)) return lhs;
      if (lhs.is_constant(0)) return unary(Op::neg, rhs);
      break;
    case Op::mul:
      if (lhs.is_constant(0) || rhs.is_constant(0)) return Expression();
      if (lhs.is_constant(1)) return rhs;
      if (rhs.is_constant(1)) return lhs;
      if (lhs.is_constant(-1)) return unary(Op::neg, rhs);
      if (rhs.is_constant(-1)) return unary(Op::neg, lhs);
      break;
    case Op::div:
      if (rhs.is_constant(1)) return lhs;
      if (lhs.is_constant(0) && !rhs.is_constant(0)) return Expression();
      break;
    case Op::pow:
      if (rhs.is_constant(1)) return lhs;
      if (rhs.is_constant(0)) return constant(1.0);
      break;
    default:
      break;
  }
  auto n = make_node(op);
  n->a = lhs;
  n->b = rhs;
  Expression e(std::move(n));
  if (lhs.is_constant() && rhs.is_constant())
    if (auto v = try_fold(e)) return constant(*v);
  return e;
}

Expression Expression::iterated(Op op, int depth, const Expression& arg) {
  if (op != Op::logk && op != Op::expk) throw InvalidArgument("not an iterated operator");
  if (depth < 0) throw InvalidArgument("iteration depth must be non-negative");
  if (depth == 0) return arg;
  auto n = make_node(op);
  n->depth = depth;
  n->a = arg;
  Expression e(std::move(n));
  if (arg.is_constant())
    if (auto v = try_fold(e)) return constant(*v);
  return e;
}

Expression operator+(const Expression& a, const Expression& b) { return Expression::binary(Op::add, a, b); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::binary(Op::sub, a, b); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::binary(Op::mul, a, b); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::binary(Op::div, a, b); }
Expression operator-(const Expression& a) { return Expression::unary(Op::neg, a); }

Expression pow(const Expression& base, const Expression& exponent) {
  return Expression::binary(Op::pow, base, exponent);
}
Expression pow(const Expression& base, double exponent) { return pow(base, Expression::constant(exponent)); }
Expression log(const Expression& e) { return Expression::unary(Op::log, e); }
Expression exp(const Expression& e) { return Expression::unary(Op::exp, e); }
Expression sqrt(const Expression& e) { return Expression::unary(Op::sqrt, e); }
Expression sinh(const Expression& e) { return Expression::unary(Op::sinh, e); }
Expression cosh(const Expression& e) { return Expression::unary(Op::cosh, e); }
Expression tanh(const Expression& e) { return Expression::unary(Op::tanh, e); }
Expression coth(const Expression& e) { return Expression::unary(Op::coth, e); }
Expression ct(const Expression& e) { return Expression::unary(Op::ct, e); }
Expression logk(int depth, const Expression& e) { return Expression::iterated(Op::logk, depth, e); }
Expression expk(int depth, const Expression& e) { return Expression::iterated(Op::expk, depth, e); }

namespace detail {

const char* op_name(Op op) {
  switch (op) {
    case Op::constant: return "constant";
    case Op::variable: return "t";
    case Op::parameter: return "parameter";
    case Op::neg: return "-";
    case Op::log: return "log";
    case Op::exp: return "exp";
    case Op::sqrt: return "sqrt";
    case Op::sinh: return "sinh";
    case Op::cosh: return "cosh";
    case Op::tanh: return "tanh";
    case Op::coth: return "coth";
    case Op::ct: return "ct";
    case Op::add: return "+";
    case Op::sub: return "-";
    case Op::mul: return "*";
    case Op::div: return "/";
    case Op::pow: return "^";
    case Op::logk: return "logk";
    case Op::expk: return "expk";
  }
  return "?";
}

}  // namespace detail

double evaluate(const Expression& e, const Bindings& b) {
  detail::ScalarBindings<double> sb;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    sb.bound[i] = b.params[i].has_value();
    sb.values[i] = b.params[i].value_or(0.0);
  }
  sb.t = b.t;
  const double v = detail::eval_node(e, sb);
  if (!std::isfinite(v)) throw DomainError("result", v);
  return v;
}

std::string print(const Expression& e) {
  const Op op = e.op();
  switch (op) {
    case Op::constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.value());
      return e.value() < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
    }
    case Op::variable:
      return "t";
    case Op::parameter:
      return std::string(param_name(e.param()));
    case Op::neg:
      return "(-" + print(e.lhs()) + ")";
    case Op::logk:
    case Op::expk:
      return std::string(detail::op_name(op)) + "(" + std::to_string(e.depth()) + ", " + print(e.lhs()) + ")";
    default:
      break;
  }
  if (is_unary(op)) return std::string(detail::op_name(op)) + "(" + print(e.lhs()) + ")";
  return "(" + print(e.lhs()) + detail::op_name(op) + print(e.rhs()) + ")";
}

}  // namespace rellich::expr
