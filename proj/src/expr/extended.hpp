#pragma once

// Evaluation with a binary exponent range far beyond double, used when the
// radial variable is too close to 0 to be represented (t = R exp(-1e8)).

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "rellich/expr.hpp"

namespace rellich::expr {

using ExtReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<32>,
                                              boost::multiprecision::et_off>;

/// Parameters come from `params` (as doubles); the radius is extended.
ExtReal evaluate_extended(const Expression& e, const Bindings& params, const ExtReal& t);

}  // namespace rellich::expr
