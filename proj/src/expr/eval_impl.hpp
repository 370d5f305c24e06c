#pragma once

// Tree-walking evaluator shared by the double and extended-range paths.

#include <array>
#include <cmath>
#include <string>

#include "rellich/expr.hpp"

namespace rellich::expr::detail {

const char* op_name(Op op);

template <class T>
struct ScalarBindings {
  std::array<T, kParamCount> values{};
  std::array<bool, kParamCount> bound{};
  T t{};
};

template <class T>
[[noreturn]] void domain_error(const char* primitive, const T& v) {
  throw DomainError(primitive, static_cast<double>(v));
}

template <class T>
T int_pow(T base, long long e) {
  const bool negative = e < 0;
  unsigned long long m = negative ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
  T acc(1);
  while (m) {
    if (m & 1u) acc *= base;
    base *= base;
    m >>= 1u;
  }
  return negative ? T(1) / acc : acc;
}

template <class T>
T eval_node(const Expression& e, const ScalarBindings<T>& b) {
  using std::cosh;
  using std::exp;
  using std::floor;
  using std::isnan;
  using std::log;
  using std::pow;
  using std::sinh;
  using std::sqrt;
  using std::tanh;
  using std::abs;

  const Node* n = e.node();
  if (!n) return T(0);
  switch (n->op) {
    case Op::constant:
      return T(n->value);
    case Op::variable:
      return b.t;
    case Op::parameter: {
      const auto i = static_cast<std::size_t>(n->param);
      if (!b.bound[i]) throw UnboundParameterError(std::string(param_name(n->param)));
      return b.values[i];
    }
    case Op::neg:
      return -eval_node(n->a, b);
    case Op::log: {
      T x = eval_node(n->a, b);
      if (!(x > 0)) domain_error("log", x);
      return log(x);
    }
    case Op::exp:
      return exp(eval_node(n->a, b));
    case Op::sqrt: {
      T x = eval_node(n->a, b);
      if (x < 0 || isnan(x)) domain_error("sqrt", x);
      return sqrt(x);
    }
    case Op::sinh:
      return sinh(eval_node(n->a, b));
    case Op::cosh:
      return cosh(eval_node(n->a, b));
    case Op::tanh:
      return tanh(eval_node(n->a, b));
    case Op::coth: {
      T x = eval_node(n->a, b);
      if (x == 0 || isnan(x)) domain_error("coth", x);
      return T(1) / tanh(x);
    }
    case Op::ct: {
      T x = eval_node(n->a, b);
      const auto ki = static_cast<std::size_t>(Param::kappa);
      if (!b.bound[ki]) throw UnboundParameterError("kappa");
      const T& kappa = b.values[ki];
      if (kappa < 0) domain_error("ct (kappa)", kappa);
      if (!(x > 0)) domain_error("ct", x);
      if (kappa == 0) return T(1) / x;
      return kappa / tanh(kappa * x);
    }
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: {
      T x = eval_node(n->a, b);
      T y = eval_node(n->b, b);
      T r;
      switch (n->op) {
        case Op::add: r = x + y; break;
        case Op::sub: r = x - y; break;
        case Op::mul: r = x * y; break;
        case Op::div:
          if (y == 0) domain_error("/", y);
          r = x / y;
          break;
        default: {
          if (floor(y) == y && abs(y) <= T(1024)) {
            const long long k = static_cast<long long>(y);
            if (x == 0 && k < 0) domain_error("^", x);
            r = int_pow(x, k);
          } else {
            if (!(x > 0)) domain_error("^", x);
            r = pow(x, y);
          }
        }
      }
      if (isnan(r)) domain_error(op_name(n->op), x);
      return r;
    }
    case Op::logk: {
      T x = eval_node(n->a, b);
      for (int i = 0; i < n->depth; ++i) {
        if (!(x > 0)) domain_error("logk", x);
        x = log(x);
      }
      return x;
    }
    case Op::expk: {
      T x = eval_node(n->a, b);
      for (int i = 0; i < n->depth; ++i) x = exp(x);
      return x;
    }
  }
  return T(0);
}

}  // namespace rellich::expr::detail
