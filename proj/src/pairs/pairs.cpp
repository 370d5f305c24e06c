#include <cmath>
#include <utility>

#include "rellich/pairs.hpp"

namespace rellich::pairs {

using expr::differentiate;
using expr::evaluate;
using expr::num;
using expr::Param;

namespace {

struct Acc {
  double value = 0.0;
  double magnitude = 0.0;
  Acc& operator+=(double term) {
    value += term;
    magnitude += std::abs(term);
    return *this;
  }
  Sample sample() const { return {value, magnitude}; }
};

Expression big_l_expr(int n) { return static_cast<double>(n - 1) * expr::ct(expr::t()); }

Expression big_l_prime_expr(int n) {
  const Expression kappa = expr::param(Param::kappa);
  return static_cast<double>(n - 1) * (expr::pow(kappa, 2.0) - expr::pow(expr::ct(expr::t()), 2.0));
}

Expression log_derivative(const Expression& f) { return differentiate(f) / f; }

Bindings euclidean_params(const PairSpec& p, int n) {
  Bindings b = p.params();
  b.set(Param::n, n).set(Param::kappa, 0.0);
  return b;
}

}  // namespace

std::string_view kind_name(PairKind k) {
  switch (k) {
    case PairKind::primal:
      return "primal";
    case PairKind::dual:
      return "dual";
    case PairKind::bessel_potential:
      return "bessel-potential";
    case PairKind::bessel_pair:
      return "bessel-pair";
  }
  return "unknown";
}

double Sample::relative() const { return value / std::max(1.0, magnitude); }

PairSpec PairSpec::primal(Expression G, Expression w, Expression W, Bindings params,
                          std::optional<Expression> dlog_w) {
  PairSpec s;
  PrimalPair body{G, w, W, differentiate(G), dlog_w ? *dlog_w : log_derivative(w)};
  s.body_ = std::move(body);
  s.params_ = params;
  return s;
}

PairSpec PairSpec::dual(Expression H, Expression v, Expression V, Bindings params,
                        std::optional<Expression> dlog_v) {
  PairSpec s;
  DualPair body{H, v, V, differentiate(H), dlog_v ? *dlog_v : log_derivative(v)};
  s.body_ = std::move(body);
  s.params_ = params;
  return s;
}

PairSpec PairSpec::bessel_potential(Expression z, Expression Z, double c, Bindings params) {
  if (!(c > 0) && c != 0.0) throw InvalidArgument("Bessel potential constant c must be >= 0");
  PairSpec s;
  const Expression dz = differentiate(z);
  s.body_ = BesselPotential{z, Z, c, dz, differentiate(dz)};
  if (!params.get(Param::c)) params.set(Param::c, c);
  s.params_ = params;
  return s;
}

PairSpec PairSpec::bessel_pair(std::optional<Expression> y, Expression X, Expression Y, double C,
                               Bindings params) {
  PairSpec s;
  BesselPair body;
  body.y = y;
  body.X = X;
  body.Y = Y;
  body.C = C;
  body.dlog_X = log_derivative(X);
  if (y) {
    body.dy = differentiate(*y);
    body.d2y = differentiate(body.dy);
  }
  s.body_ = std::move(body);
  s.params_ = params;
  return s;
}

PairKind PairSpec::kind() const { return static_cast<PairKind>(body_.index()); }

const PrimalPair& PairSpec::as_primal() const {
  if (auto* p = std::get_if<PrimalPair>(&body_)) return *p;
  throw InvalidArgument("expected a primal pair, got " + std::string(kind_name(kind())));
}

const DualPair& PairSpec::as_dual() const {
  if (auto* p = std::get_if<DualPair>(&body_)) return *p;
  throw InvalidArgument("expected a dual pair, got " + std::string(kind_name(kind())));
}

const BesselPotential& PairSpec::as_potential() const {
  if (auto* p = std::get_if<BesselPotential>(&body_)) return *p;
  throw InvalidArgument("expected a Bessel potential, got " + std::string(kind_name(kind())));
}

const BesselPair& PairSpec::as_bessel_pair() const {
  if (auto* p = std::get_if<BesselPair>(&body_)) return *p;
  throw InvalidArgument("expected a Bessel pair, got " + std::string(kind_name(kind())));
}

Bindings PairSpec::bindings(const SpaceForm& sf) const { return params_.merged(sf.bindings()); }

PairSpec PairSpec::with_signed_potential(bool on) const {
  PairSpec s = *this;
  s.signed_ = on;
  return s;
}

PairSpec PairSpec::with_note(std::string note) const {
  PairSpec s = *this;
  s.note_ = std::move(note);
  return s;
}

Sample riccati_residual_terms(const SpaceForm& sf, const PairSpec& p, double t) {
  const PrimalPair& q = p.as_primal();
  const Bindings b = p.bindings(sf).at(t);
  const double G = evaluate(q.G, b);
  const double L = geometry::big_l(sf, t);
  Acc acc;
  acc += evaluate(q.dG, b);
  acc += L * G;
  acc += evaluate(q.dlog_w, b) * G;
  acc += -G * G;
  acc += -evaluate(q.W, b);
  return acc.sample();
}

double riccati_residual(const SpaceForm& sf, const PairSpec& p, double t) {
  return riccati_residual_terms(sf, p, t).value;
}

Sample dual_riccati_residual_terms(const SpaceForm& sf, const PairSpec& p, double t) {
  const DualPair& q = p.as_dual();
  const Bindings b = p.bindings(sf).at(t);
  const double H = evaluate(q.H, b);
  const double L = geometry::big_l(sf, t);
  Acc acc;
  acc += -evaluate(q.dH, b);
  acc += L * H;
  acc += -evaluate(q.dlog_v, b) * H;
  acc += -H * H;
  acc += -evaluate(q.V, b);
  return acc.sample();
}

double dual_riccati_residual(const SpaceForm& sf, const PairSpec& p, double t) {
  return dual_riccati_residual_terms(sf, p, t).value;
}

Sample e1_terms(const SpaceForm& sf, const PairSpec& p, double t) {
  const DualPair& q = p.as_dual();
  const Bindings b = p.bindings(sf).at(t);
  const double v = evaluate(q.v, b);
  const double H = evaluate(q.H, b);
  const double c = geometry::ct(sf, t);
  Acc acc;
  acc += v * evaluate(q.dlog_v, b) * H;
  acc += v * evaluate(q.dH, b);
  acc += v * H * geometry::big_l(sf, t);
  acc += -2.0 * v * H * c;
  return acc.sample();
}

double e1(const SpaceForm& sf, const PairSpec& p, double t) { return e1_terms(sf, p, t).value; }

Sample e2_terms(const SpaceForm& sf, const PairSpec& p, double t) {
  const DualPair& q = p.as_dual();
  const Bindings b = p.bindings(sf).at(t);
  const double v = evaluate(q.v, b);
  const double H = evaluate(q.H, b);
  const double c = geometry::ct(sf, t);
  Acc acc;
  acc += 2.0 * v * evaluate(q.dlog_v, b) * H;
  acc += 2.0 * v * evaluate(q.dH, b);
  acc += v * H * H;
  acc += -2.0 * v * H * c;
  return acc.sample();
}

double e2(const SpaceForm& sf, const PairSpec& p, double t) { return e2_terms(sf, p, t).value; }

Sample bessel_potential_residual_terms(const PairSpec& p, double t) {
  const BesselPotential& q = p.as_potential();
  if (!(t > 0)) throw InvalidArgument("bessel_potential_residual: radius must be positive");
  const Bindings b = p.params().at(t);
  Acc acc;
  acc += evaluate(q.d2z, b);
  acc += evaluate(q.dz, b) / t;
  acc += q.c * evaluate(q.Z, b) * evaluate(q.z, b);
  return acc.sample();
}

double bessel_potential_residual(const PairSpec& p, double t) { return bessel_potential_residual_terms(p, t).value; }

Sample bessel_pair_residual_terms(const PairSpec& p, int n, double t) {
  const BesselPair& q = p.as_bessel_pair();
  if (!q.y) throw InvalidArgument("bessel_pair_residual: pair has no explicit y (use disconjugacy_check)");
  if (!(t > 0)) throw InvalidArgument("bessel_pair_residual: radius must be positive");
  const Bindings b = euclidean_params(p, n).at(t);
  const double dy = evaluate(q.dy, b);
  Acc acc;
  acc += evaluate(q.d2y, b);
  acc += (n - 1) / t * dy;
  acc += evaluate(q.dlog_X, b) * dy;
  acc += q.C * evaluate(q.Y, b) / evaluate(q.X, b) * evaluate(*q.y, b);
  return acc.sample();
}

double bessel_pair_residual(const PairSpec& p, int n, double t) { return bessel_pair_residual_terms(p, n, t).value; }

Sample defining_residual(const SpaceForm& sf, const PairSpec& p, double t) {
  switch (p.kind()) {
    case PairKind::primal:
      return riccati_residual_terms(sf, p, t);
    case PairKind::dual:
      return dual_riccati_residual_terms(sf, p, t);
    case PairKind::bessel_potential:
      return bessel_potential_residual_terms(p, t);
    case PairKind::bessel_pair:
      return bessel_pair_residual_terms(p, sf.n, t);
  }
  throw InvalidArgument("unknown pair kind");
}

PairSpec primal_to_dual(const PairSpec& p, const SpaceForm& sf) {
  const PrimalPair& q = p.as_primal();
  const Expression L = big_l_expr(sf.n);
  const Expression V = q.W - q.dlog_w * L - big_l_prime_expr(sf.n);
  Bindings params = p.params();
  params.set(Param::n, sf.n).set(Param::kappa, sf.kappa);
  return PairSpec::dual(L - q.G, q.w, V, params, q.dlog_w).with_signed_potential(p.signed_potential());
}

PairSpec dual_to_primal(const PairSpec& p, const SpaceForm& sf) {
  const DualPair& q = p.as_dual();
  const Expression L = big_l_expr(sf.n);
  const Expression W = q.V + q.dlog_v * L + big_l_prime_expr(sf.n);
  Bindings params = p.params();
  params.set(Param::n, sf.n).set(Param::kappa, sf.kappa);
  return PairSpec::primal(L - q.H, q.v, W, params, q.dlog_v).with_signed_potential(p.signed_potential());
}

namespace {

void require_verified_potential(const PairSpec& p) {
  const double R = p.params().get(Param::R).value_or(1e3);
  const double hi = std::min(R, 1e3);
  for (double t : log_grid(1e-6 * hi, hi, 400)) {
    const Sample s = bessel_potential_residual_terms(p, t);
    if (!(std::abs(s.relative()) <= 1e-9))
      throw InvalidArgument("input potential not verified: residual " + std::to_string(s.value) + " at t = " +
                            std::to_string(t));
  }
}

Expression tpow(double exponent) { return expr::pow(expr::t(), exponent); }

}  // namespace

PairSpec from_bessel_potential(const PairSpec& p, PotentialConstruction variant, int n) {
  const BesselPotential& q = p.as_potential();
  if (n < 2) throw InvalidArgument("dimension must be >= 2");
  require_verified_potential(p);
  const Bindings params = euclidean_params(p, n);
  const Expression t = expr::t();
  const double m = n - 2.0;
  const Expression cZ = q.c * q.Z;
  switch (variant) {
    case PotentialConstruction::to_bessel_pair:
      return PairSpec::bessel_pair(q.z * tpow((2.0 - n) / 2.0), num(1.0), m * m / 4.0 / expr::pow(t, 2.0) + cZ, 1.0,
                                   params);
    case PotentialConstruction::to_primal:
      return PairSpec::primal(-(q.dz / q.z) + m / (2.0 * t), num(1.0), m * m / 4.0 / expr::pow(t, 2.0) + cZ, params);
    case PotentialConstruction::to_dual:
      return PairSpec::dual(n / (2.0 * t) + q.dz / q.z, num(1.0),
                            static_cast<double>(n) * n / 4.0 / expr::pow(t, 2.0) + cZ, params);
  }
  throw InvalidArgument("unknown construction");
}

PairSpec from_bessel_pair(const PairSpec& p, int n) {
  const BesselPair& q = p.as_bessel_pair();
  if (!q.y) throw InvalidArgument("from_bessel_pair: an explicit y is required");
  return PairSpec::primal(-(q.dy / *q.y), q.X, q.C * q.Y / q.X, euclidean_params(p, n), q.dlog_X);
}

WeightedBesselPairs weighted_bessel_pairs(const PairSpec& potential, double lambda, int n) {
  const BesselPotential& q = potential.as_potential();
  if (!(lambda < n - 2)) throw InvalidArgument("weighted_bessel_pairs: require lambda < n - 2");
  Bindings params = euclidean_params(potential, n);
  params.set(Param::lambda, lambda);
  const Expression t = expr::t();
  const double a = n - 4.0;
  const double b = n - lambda - 2.0;
  PairSpec first = PairSpec::bessel_pair(q.z * tpow(-a / 2.0), 1.0 / expr::pow(t, 2.0),
                                         a * a / 4.0 / expr::pow(t, 4.0) + q.c * q.Z / expr::pow(t, 2.0), 1.0, params);
  PairSpec second =
      PairSpec::bessel_pair(std::nullopt, q.Z, b * b / 4.0 * q.Z / expr::pow(t, 2.0), 1.0, params);
  return {std::move(first), std::move(second)};
}

PairSpec weighted_pair_primal(const PairSpec& potential, double lambda, int n) {
  const BesselPotential& q = potential.as_potential();
  if (!(lambda < n - 2)) throw InvalidArgument("weighted_pair_primal: require lambda < n - 2");
  Bindings params = euclidean_params(potential, n);
  params.set(Param::lambda, lambda);
  const Expression t = expr::t();
  const double b = n - lambda - 2.0;
  return PairSpec::primal(b / (2.0 * t), q.Z, b * b / 4.0 / expr::pow(t, 2.0), params);
}

PolynomialRoots corollary_polynomial_roots(int n) {
  if (n < 5) throw InvalidArgument("corollary_polynomial_roots: require n >= 5");
  const double disc = 3.0 * n * n - 16.0 * n + 14.0;
  if (disc < 0) throw NumericalFailure("corollary_polynomial_roots: negative discriminant");
  const double s = std::sqrt(disc);
  return {(n - 4.0 - s) / 2.0, (n - 4.0 + s) / 2.0};
}

double corollary_polynomial(int n, double q) { return -q * q + (n - 4.0) * q + (n * n - 4.0 * n - 1.0) / 2.0; }

}  // namespace rellich::pairs
