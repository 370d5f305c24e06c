#include <cmath>
#include <string>

#include "rellich/expr.hpp"

namespace rellich::expr {

namespace {

struct Var {
  bool is_t = true;
  Param p = Param::n;
};

bool depends(const Expression& e, const Var& v) { return v.is_t ? e.depends_on_t() : e.depends_on(v.p); }

Expression d(const Expression& e, const Var& v);

// Chain-rule helper for f(a): f'(a) * a'.
Expression chain(const Expression& outer, const Expression& a, const Var& v) {
  if (!depends(a, v)) return Expression();
  return outer * d(a, v);
}

Expression d(const Expression& e, const Var& v) {
  if (!depends(e, v)) return Expression();
  const Expression a = e.lhs();
  const Expression b = e.rhs();
  const Expression kappa = param(Param::kappa);
  switch (e.op()) {
    case Op::constant:
      return Expression();
    case Op::variable:
      return num(1.0);
    case Op::parameter:
      return num(1.0);
    case Op::neg:
      return -d(a, v);
    case Op::log:
      return chain(1.0 / a, a, v);
    case Op::exp:
      return chain(e, a, v);
    case Op::sqrt:
      return chain(1.0 / (2.0 * e), a, v);
    case Op::sinh:
      return chain(cosh(a), a, v);
    case Op::cosh:
      return chain(sinh(a), a, v);
    case Op::tanh:
      return chain(1.0 - pow(e, 2.0), a, v);
    case Op::coth:
      return chain(1.0 - pow(e, 2.0), a, v);
    case Op::ct: {
      // d/dx ct(x) = kappa^2 - ct(x)^2 for every kappa >= 0.
      Expression out = chain(pow(kappa, 2.0) - pow(e, 2.0), a, v);
      if (!v.is_t && v.p == Param::kappa) {
        // partial_kappa [kappa coth(kappa x)] = (ct(x) + x (kappa^2 - ct(x)^2)) / kappa
        out = out + (e + a * (pow(kappa, 2.0) - pow(e, 2.0))) / kappa;
      }
      return out;
    }
    case Op::add:
      return d(a, v) + d(b, v);
    case Op::sub:
      return d(a, v) - d(b, v);
    case Op::mul:
      return d(a, v) * b + a * d(b, v);
    case Op::div:
      if (!depends(b, v)) return d(a, v) / b;
      return (d(a, v) * b - a * d(b, v)) / pow(b, 2.0);
    case Op::pow:
      if (!depends(b, v)) {
        if (b.is_constant()) return chain(b.value() * pow(a, b.value() - 1.0), a, v);
        return chain(b * pow(a, b - 1.0), a, v);
      }
      // a^b (b' log a + b a'/a)
      return e * (d(b, v) * log(a) + b * d(a, v) / a);
    case Op::logk: {
      Expression factor = num(1.0);
      for (int j = 0; j < e.depth(); ++j) factor = factor / logk(j, a);
      return chain(factor, a, v);
    }
    case Op::expk: {
      Expression factor = num(1.0);
      for (int j = 1; j <= e.depth(); ++j) factor = factor * expk(j, a);
      return chain(factor, a, v);
    }
  }
  return Expression();
}

}  // namespace

Expression differentiate(const Expression& e) { return d(e, Var{}); }

Expression differentiate(const Expression& e, std::string_view var) {
  if (var == "t") return d(e, Var{});
  auto p = param_from_name(var);
  if (!p) throw InvalidArgument("cannot differentiate with respect to '" + std::string(var) + "'");
  return d(e, Var{false, *p});
}

double fd_check(const Expression& e, const Bindings& b, double h) {
  if (!(h > 0)) throw InvalidArgument("fd_check step must be positive");
  const double symbolic = evaluate(differentiate(e), b);
  const double plus = evaluate(e, b.at(b.t + h));
  const double minus = evaluate(e, b.at(b.t - h));
  return std::abs(symbolic - (plus - minus) / (2.0 * h));
}

}  // namespace rellich::expr
