// Disconjugacy of y'' + P y' + Q y = 0 on (0, R).
//
// With s = log(R/t) the equation reads y_ss + (1 - tP) y_s + t^2 Q y = 0.
// The modified Pruefer angle theta (y = rho sin theta, y_s = rho cos theta)
// obeys theta_s = cos^2 + a sin cos + b sin^2 and y vanishes exactly when
// theta crosses a multiple of pi. Integrating theta instead of y keeps the
// step size proportional to the scale of the coefficients, so the start can
// sit at t0 = R exp(-1e8), where the coefficients are evaluated in extended
// range.

#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "expr/extended.hpp"
#include "rellich/pairs.hpp"

namespace rellich::pairs {

namespace {

using expr::ExtReal;

// Below this s, t and its moderate powers are normal doubles.
constexpr double kDoubleRange = 40.0;
constexpr double kScaleFloor = 1e-6;

struct Coefficients {
  Expression A;  // t P(t)
  Expression B;  // t^2 Q(t)
  Bindings params;
  double R = 1.0;

  std::pair<double, double> at(double s) const {
    if (s < kDoubleRange) {
      const Bindings b = params.at(R * std::exp(-s));
      return {1.0 - expr::evaluate(A, b), expr::evaluate(B, b)};
    }
    const ExtReal t = ExtReal(R) * boost::multiprecision::exp(-ExtReal(s));
    const double a = static_cast<double>(expr::evaluate_extended(A, params, t));
    const double b = static_cast<double>(expr::evaluate_extended(B, params, t));
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("disconjugacy coefficient", s);
    return {1.0 - a, b};
  }

};

Coefficients coefficients(const PairSpec& p, int n, double R) {
  Bindings params = p.params();
  params.set(expr::Param::n, n).set(expr::Param::kappa, 0.0);
  const Expression t = expr::t();
  if (p.kind() == PairKind::bessel_potential) {
    const BesselPotential& q = p.as_potential();
    return {expr::num(1.0), q.c * expr::pow(t, 2.0) * q.Z, params, R};
  }
  const BesselPair& q = p.as_bessel_pair();
  return {static_cast<double>(n - 1) + t * q.dlog_X, q.C * expr::pow(t, 2.0) * q.Y / q.X, params, R};
}

// Two-stage Radau IIA (order 3, L-stable). Near a double indicial root the
// angle is attracted to a slowly moving equilibrium and explicit schemes are
// stability limited.
struct Radau {
  const Coefficients& c;
  double newton_tol;

  static double f(double a, double b, double theta) {
    const double sn = std::sin(theta), cs = std::cos(theta);
    return cs * cs + a * sn * cs + b * sn * sn;
  }
  static double f_theta(double a, double b, double theta) {
    return -(1.0 - b) * std::sin(2.0 * theta) + a * std::cos(2.0 * theta);
  }

  // One step of size h from (s, theta); nullopt when Newton fails.
  std::optional<double> step(double s, double theta, double h) const {
    static constexpr double A11 = 5.0 / 12, A12 = -1.0 / 12, A21 = 3.0 / 4, A22 = 1.0 / 4;
    const auto [a1, b1] = c.at(s + h / 3);
    const auto [a2, b2] = c.at(s + h);
    double k1 = f(a1, b1, theta), k2 = f(a2, b2, theta);
    double prev_dk = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 25; ++it) {
      const double y1 = theta + h * (A11 * k1 + A12 * k2);
      const double y2 = theta + h * (A21 * k1 + A22 * k2);
      const double r1 = k1 - f(a1, b1, y1);
      const double r2 = k2 - f(a2, b2, y2);
      const double j1 = f_theta(a1, b1, y1), j2 = f_theta(a2, b2, y2);
      // Jacobian of (r1, r2) with respect to (k1, k2)
      const double m11 = 1.0 - h * j1 * A11, m12 = -h * j1 * A12;
      const double m21 = -h * j2 * A21, m22 = 1.0 - h * j2 * A22;
      const double det = m11 * m22 - m12 * m21;
      if (!(std::abs(det) > 1e-300)) return std::nullopt;
      const double d1 = (r1 * m22 - r2 * m12) / det;
      const double d2 = (m11 * r2 - m21 * r1) / det;
      k1 -= d1;
      k2 -= d2;
      const double dk = std::abs(d1) + std::abs(d2);
      // stagnation at the rounding floor also counts once it is small
      const bool stalled = dk >= 0.5 * prev_dk && std::abs(h) * dk <= 100.0 * newton_tol;
      prev_dk = dk;
      if (std::abs(h) * dk <= newton_tol || stalled)
        return theta + h * (0.75 * k1 + 0.25 * k2);
    }
    return std::nullopt;
  }
};

struct Step {
  double theta;
  double error;
};

// Step doubling: the two half steps are kept, the difference estimates the error.
std::optional<Step> doubled_step(const Radau& r, double s, double theta, double h) {
  const auto full = r.step(s, theta, h);
  if (!full) return std::nullopt;
  const auto half = r.step(s, theta, h / 2);
  if (!half) return std::nullopt;
  const auto two = r.step(s + h / 2, *half, h / 2);
  if (!two) return std::nullopt;
  return Step{*two, std::abs(*two - *full) / 7.0};
}

}  // namespace

DisconjugacyReport disconjugacy_check(const PairSpec& p, int n, double R, const DisconjugacyOptions& opt) {
  if (p.kind() != PairKind::bessel_potential && p.kind() != PairKind::bessel_pair)
    throw InvalidArgument("disconjugacy_check: expected a Bessel potential or Bessel pair");
  if (!(R > 0) || !std::isfinite(R)) throw InvalidArgument("disconjugacy_check: require a finite R > 0");
  if (!(opt.depth > 0)) throw InvalidArgument("disconjugacy_check: depth must be positive");
  const Coefficients c = coefficients(p, n, R);
  const Radau radau{c, 1e-3 * opt.tol};

  DisconjugacyReport rep;
  const double s0 = opt.depth;
  const double s_end = 1e-9;
  rep.log_t0 = std::log(R) - s0;

  // Recessive Frobenius data: y ~ e^{mu s} with the smaller root of
  // mu^2 + a mu + b = 0, i.e. the larger exponent in t.
  const auto [a0, b0] = c.at(s0);
  const double disc = a0 * a0 - 4.0 * b0;
  const double mu = disc >= 0 ? (-a0 - std::sqrt(disc)) / 2.0 : -a0 / 2.0;
  rep.exponent = -mu;
  if (disc < 0) rep.note = "complex indicial roots at t0; starting from their real part";

  double theta = std::atan2(1.0, mu);
  double s = s0;
  double h = -std::min(1.0, 1e-3 * s0);
  try {
    while (s > s_end) {
      if (++rep.steps > opt.max_steps) throw NumericalFailure("disconjugacy_check: step budget exhausted");
      h = std::max(h, s_end - s);
      h = std::max(h, -0.25 * std::max(1.0, s));
      const std::optional<Step> st = doubled_step(radau, s, theta, h);
      // relative control of the log-derivative cot(theta) = y_s / y
      const double scale = std::max(std::abs(std::sin(theta) * std::cos(theta)), kScaleFloor);
      const double err = st ? st->error / (opt.tol * scale) : 1e3;
      if (err > 1.0) {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
        if (std::abs(h) < 1e-14 * std::max(1.0, s)) throw NumericalFailure("disconjugacy_check: step size underflow");
        continue;
      }
      if (st->theta <= 0.0) {
        // Locate the crossing inside the accepted step.
        double lo = 0.0, hi = h;
        for (int k = 0; k < 80; ++k) {
          const double mid = 0.5 * (lo + hi);
          const auto part = radau.step(s, theta, mid);
          if (part && *part > 0.0)
            lo = mid;
          else
            hi = mid;
        }
        const double s_zero = s + 0.5 * (lo + hi);
        rep.first_zero_log = std::log(R) - s_zero;
        rep.first_zero = std::exp(*rep.first_zero_log);
        rep.positive_solution = false;
        return rep;
      }
      s += h;
      theta = st->theta;
      h *= std::min(5.0, 0.9 * std::pow(std::max(err, 1e-10), -0.25));
    }
  } catch (const Error& e) {
    rep.inconclusive = true;
    rep.positive_solution = false;
    rep.note = e.what();
    return rep;
  }
  rep.positive_solution = true;
  return rep;
}

}  // namespace rellich::pairs
