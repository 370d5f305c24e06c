#include "extended.hpp"

#include "eval_impl.hpp"

namespace rellich::expr {

ExtReal evaluate_extended(const Expression& e, const Bindings& params, const ExtReal& t) {
  detail::ScalarBindings<ExtReal> sb;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    sb.bound[i] = params.params[i].has_value();
    sb.values[i] = ExtReal(params.params[i].value_or(0.0));
  }
  sb.t = t;
  ExtReal v = detail::eval_node(e, sb);
  if (!boost::multiprecision::isfinite(v)) throw DomainError("result", static_cast<double>(v));
  return v;
}

}  // namespace rellich::expr
