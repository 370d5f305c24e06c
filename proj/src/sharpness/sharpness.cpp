#include "rellich/sharpness.hpp"

#include <cmath>
#include <limits>

namespace rellich::sharpness {

using verify::Gradient;
using verify::QuadratureOptions;
using verify::QuadratureResult;

namespace {

struct Sides {
  QuadratureResult lhs, rhs;
};

Sides sides(const Problem& p, const RadialTestFunction& u, const QuadratureOptions& quad) {
  const SpaceForm& sf = p.sf;
  switch (p.shape) {
    case Shape::delta_vs_gradrad:
    case Shape::delta_vs_grad: {
      if (!p.spec || p.spec->kind() != pairs::PairKind::dual) throw InvalidArgument("rayleigh_quotient: delta shapes need a dual pair");
      const auto& d = p.spec->as_dual();
      const auto b = p.spec->bindings(sf);
      const Gradient g = p.shape == Shape::delta_vs_grad ? Gradient::grad : Gradient::gradrad;
      return {verify::lhs_delta_sq(sf, d.v, b, u, quad), verify::rhs_weighted(sf, d.v * d.V, b, u, g, quad)};
    }
    case Shape::gradrad_vs_usq: {
      if (!p.spec || p.spec->kind() != pairs::PairKind::primal) throw InvalidArgument("rayleigh_quotient: gradrad-vs-usq needs a primal pair");
      const auto& q = p.spec->as_primal();
      const auto b = p.spec->bindings(sf);
      return {verify::rhs_weighted(sf, q.w, b, u, Gradient::gradrad, quad),
              verify::rhs_weighted(sf, q.w * q.W, b, u, Gradient::usq, quad)};
    }
    case Shape::chain: {
      if (!p.chain) throw InvalidArgument("rayleigh_quotient: chain shape needs a chain");
      const auto& d = p.chain->dual.as_dual();
      const auto b = p.chain->dual.bindings(sf);
      return {verify::lhs_delta_sq(sf, d.v, b, u, quad),
              verify::rhs_weighted(sf, catalog::terms_density(p.chain->final_terms), b, u, Gradient::usq, quad)};
    }
  }
  throw InvalidArgument("rayleigh_quotient: unknown shape");
}

struct Quotient {
  double value, error;
};

Quotient quotient(const Problem& p, const RadialTestFunction& u, const QuadratureOptions& quad) {
  const Sides s = sides(p, u, quad);
  if (!(s.rhs.value > 0) || s.rhs.value <= 4.0 * s.rhs.error)
    throw InvalidArgument("rayleigh_quotient: right side is not positive for " + u.describe());
  const double c = p.claimed.value_or(1.0);
  const double q = c * s.lhs.value / s.rhs.value;
  const double rel = s.lhs.error / std::max(std::abs(s.lhs.value), 1e-300) + s.rhs.error / s.rhs.value;
  return {q, std::abs(q) * rel};
}

}  // namespace

double rayleigh_quotient(const Problem& p, const RadialTestFunction& u, const QuadratureOptions& quad) {
  return quotient(p, u, quad).value;
}

FamilyBox default_box(const SpaceForm& sf) {
  const double s = std::min(sf.R, 1.0);
  FamilyBox box;
  box.lo = {-0.5 * sf.n - 1.0, std::log(1e-6 * s), 0.2, 0.05, 0.05};
  box.hi = {2.0, std::log(0.5 * s), 60.0, 0.95, 8.0};
  return box;
}

SharpnessEstimate estimate_constant(const Problem& p, const SharpnessOptions& opt) {
  if (opt.budget < 1) throw InvalidArgument("estimate_constant: budget must be positive");
  const FamilyBox box = opt.box.value_or(default_box(p.sf));
  for (int i = 0; i < 5; ++i)
    if (!(box.lo[i] <= box.hi[i])) throw InvalidArgument("estimate_constant: empty search box");

  SharpnessEstimate best;
  best.estimate = std::numeric_limits<double>::infinity();
  best.mode = p.mode;
  best.claimed = p.claimed;
  int used = 0;

  using Point = std::array<double, 5>;
  // Infeasible or degenerate members score +inf and never become best.
  auto eval = [&](const Point& x) {
    ++used;
    const double a = std::exp(x[1]);
    const double b = a * std::exp(x[2]);
    const double w_in = x[3] * a, w_out = x[4] * b;
    if (!(b + w_out < p.sf.R) || !std::isfinite(b)) return std::numeric_limits<double>::infinity();
    try {
      const auto u = geometry::make_powerlaw(x[0], a, b, w_in, w_out, p.sf, p.mode);
      const Quotient q = quotient(p, u, opt.quad);
      if (!std::isfinite(q.value)) return std::numeric_limits<double>::infinity();
      if (q.value < best.estimate) {
        best.estimate = q.value;
        best.error = q.error;
        best.alpha = x[0];
        best.a = a;
        best.b = b;
        best.w_in = w_in;
        best.w_out = w_out;
      }
      return q.value;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  auto spent = [&] { return used >= opt.budget; };

  constexpr double kInvPhi = 0.6180339887498949;
  constexpr int kSteps = 14;  // golden-section evaluations per coordinate
  Point x;
  for (int i = 0; i < 5; ++i) x[i] = 0.5 * (box.lo[i] + box.hi[i]);
  double fx = eval(x);

  while (!spent()) {
    for (int i = 0; i < 5 && !spent(); ++i) {
      double lo = box.lo[i], hi = box.hi[i];
      Point y = x;
      double c = hi - kInvPhi * (hi - lo), d = lo + kInvPhi * (hi - lo);
      y[i] = c;
      double fc = eval(y);
      if (spent()) break;
      y[i] = d;
      double fd = eval(y);
      for (int s = 2; s < kSteps && !spent(); ++s) {
        if (fc <= fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - kInvPhi * (hi - lo);
          y[i] = c;
          fc = eval(y);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + kInvPhi * (hi - lo);
          y[i] = d;
          fd = eval(y);
        }
      }
      const double cand = fc <= fd ? c : d;
      const double fcand = std::min(fc, fd);
      if (fcand < fx) {
        x[i] = cand;
        fx = fcand;
      }
    }
  }

  best.evaluations = used;
  if (!std::isfinite(best.estimate))
    throw NumericalFailure("estimate_constant: no admissible test function in the search box");
  if (p.claimed && *p.claimed != 0.0) best.gap = best.estimate / *p.claimed;
  return best;
}

}  // namespace rellich::sharpness
