#pragma once

// Upper-bound estimates of best constants by minimizing Rayleigh quotients
// over tapered power-law test functions. Estimates are not proofs.

#include <array>
#include <optional>
#include <string>

#include "rellich/verify.hpp"

namespace rellich::sharpness {

using catalog::Chain;
using catalog::Shape;
using geometry::RadialTestFunction;
using geometry::SpaceForm;
using pairs::PairSpec;

struct Problem {
  Shape shape = Shape::delta_vs_gradrad;
  /// Dual for the delta shapes, primal for gradrad-vs-usq.
  std::optional<PairSpec> spec;
  std::optional<Chain> chain;
  SpaceForm sf;
  /// Constant of the right side. The quotient is claimed * LHS / RHS, i.e.
  /// LHS over the right side with this constant divided out.
  std::optional<double> claimed;
  int mode = 0;
};

/// Throws InvalidArgument when the right side is not positive (degenerate u).
double rayleigh_quotient(const Problem& p, const RadialTestFunction& u, const verify::QuadratureOptions& quad = {});

/// Search box; coordinates are alpha, log a, log(b/a), w_in/a, w_out/b.
struct FamilyBox {
  std::array<double, 5> lo{};
  std::array<double, 5> hi{};
};
/// Default box scaled to min(R, 1); alpha in [-n/2 - 1, 2].
FamilyBox default_box(const SpaceForm& sf);

struct SharpnessOptions {
  int budget = 500;  // quotient evaluations
  std::optional<FamilyBox> box;
  verify::QuadratureOptions quad;
};

struct SharpnessEstimate {
  double estimate = 0.0;
  double alpha = 0.0, a = 0.0, b = 0.0, w_in = 0.0, w_out = 0.0;
  int mode = 0;
  std::optional<double> claimed;
  std::optional<double> gap;  // estimate / claimed
  /// Quadrature uncertainty of the best quotient.
  double error = 0.0;
  int evaluations = 0;
  std::string label = "upper-bound estimate of the best constant; not a proof";
};

/// Golden-section search on each coordinate in turn, repeated until the
/// budget is spent. The evaluation sequence for a budget is a prefix of the
/// sequence for any larger budget, so the estimate never increases with it.
SharpnessEstimate estimate_constant(const Problem& p, const SharpnessOptions& opt = {});

}  // namespace rellich::sharpness
