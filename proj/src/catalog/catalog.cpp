#include "rellich/catalog.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rellich::catalog {

using expr::Param;
using pairs::PotentialConstruction;

namespace {

Expression T() { return expr::t(); }
Expression K() { return expr::param(Param::kappa); }
Expression tpow(double e) { return expr::pow(expr::t(), e); }
Expression ct() { return expr::ct(expr::t()); }
// 1/sinh(kappa t)^p
Expression inv_sinh(double p) { return 1.0 / expr::pow(expr::sinh(K() * T()), p); }

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

std::string fmt(double v) {
  std::string s = std::to_string(v);
  while (s.size() > 1 && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

Bindings hyperbolic_params(int n, double kappa) {
  Bindings b;
  b.set(Param::n, n).set(Param::kappa, kappa);
  return b;
}

// 100-point log sample of the default scan interval.
std::vector<double> contract_sample(const SpaceForm& sf) {
  const auto [lo, hi] = pairs::scan_interval(sf, {});
  return pairs::log_grid(lo, hi, 100);
}

constexpr double kContractTol = 1e-9;

void expect_equality(const SpaceForm& sf, const PairSpec& p, const std::string& what) {
  for (double t : contract_sample(sf)) {
    const double r = pairs::defining_residual(sf, p, t).relative();
    if (!(std::abs(r) <= kContractTol))
      throw NumericalFailure(what + ": residual " + std::to_string(r) + " at t = " + std::to_string(t));
  }
}

void expect_nonnegative(const SpaceForm& sf, const std::function<pairs::Sample(double)>& f, const std::string& what) {
  for (double t : contract_sample(sf)) {
    const double r = f(t).relative();
    if (!(r >= -kContractTol))
      throw NumericalFailure(what + ": value " + std::to_string(r) + " at t = " + std::to_string(t));
  }
}

void expect_e1(const SpaceForm& sf, const PairSpec& dual, const std::string& what) {
  expect_nonnegative(sf, [&](double t) { return pairs::e1_terms(sf, dual, t); }, what + " E1");
}

void require_hyperbolic(int n, double kappa) {
  require(n >= 5, "dimension must be >= 5");
  require(kappa > 0 && std::isfinite(kappa), "kappa must be positive");
}

}  // namespace

std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::delta_vs_gradrad:
      return "delta-vs-gradrad";
    case Shape::delta_vs_grad:
      return "delta-vs-grad";
    case Shape::gradrad_vs_usq:
      return "gradrad-vs-usq";
    case Shape::chain:
      return "chain";
  }
  return "unknown";
}

std::optional<Shape> shape_from_name(std::string_view name) {
  for (Shape s : {Shape::delta_vs_gradrad, Shape::delta_vs_grad, Shape::gradrad_vs_usq, Shape::chain})
    if (shape_name(s) == name) return s;
  return std::nullopt;
}

Expression chain_weight_sum(const Chain& c) {
  Expression sum;
  for (const ChainLink& l : c.links) sum = sum + l.coefficient * l.primal.as_primal().w;
  return sum;
}

Expression chain_composed_density(const Chain& c) {
  Expression sum;
  for (const ChainLink& l : c.links) {
    const auto& p = l.primal.as_primal();
    sum = sum + l.coefficient * p.w * p.W;
  }
  return sum;
}

Expression terms_density(const std::vector<ChainTerm>& terms) {
  Expression sum;
  for (const ChainTerm& term : terms) sum = sum + term.coefficient * term.density;
  return sum;
}

const PairSpec& CatalogEntry::spec(std::string_view role) const {
  for (const NamedSpec& s : specs)
    if (s.role == role) return s.spec;
  throw InvalidArgument("catalog entry " + id + " has no spec with role '" + std::string(role) + "'");
}

CatalogEntry classical_euclidean(int n, double R) {
  require(n >= 5, "classical-rellich: dimension must be >= 5");
  require(R > 0, "classical-rellich: R must be positive");
  const double nn = n;
  Bindings params;
  params.set(Param::n, n).set(Param::kappa, 0.0);
  if (std::isfinite(R)) params.set(Param::R, R);

  const PairSpec dual = PairSpec::dual(nn / (2.0 * T()), expr::num(1.0), nn * nn / 4.0 / tpow(2), params);
  const PairSpec hardy =
      PairSpec::primal((nn - 2) / (2.0 * T()), expr::num(1.0), (nn - 2) * (nn - 2) / 4.0 / tpow(2), params);
  const PairSpec rellich = PairSpec::primal((nn - 4) / (2.0 * T()), nn * nn / 4.0 / tpow(2),
                                            (nn - 4) * (nn - 4) / 4.0 / tpow(2), params);

  CatalogEntry e;
  e.id = "classical-rellich";
  e.space = SpaceForm(n, 0.0, R);
  e.parameters = {{"n", nn, "n >= 5"}, {"R", R, "R > 0"}};
  e.specs = {{"dual", dual, {Shape::delta_vs_gradrad, Shape::delta_vs_grad}},
             {"hardy", hardy, {Shape::gradrad_vs_usq}},
             {"rellich", rellich, {Shape::gradrad_vs_usq}}};

  Chain c;
  c.id = "classical-rellich";
  c.dual = dual;
  c.links = {{"rellich", 1.0, rellich}};
  c.final_terms = {{"u^2/t^4", nn * nn * (nn - 4) * (nn - 4) / 16.0, 1.0 / tpow(4)}};
  c.note = "int |Delta u|^2 >= n^2/4 int |grad u|^2/t^2 >= n^2 (n-4)^2/16 int u^2/t^4";
  e.chain = c;
  e.provenance =
      "Euclidean Rellich inequality as a dual pair followed by a weighted Hardy primal pair. The textbook "
      "worked example writes W = n^2(n-4)^2/(16 t^4); substitution gives W = (n-4)^2/(4 t^2), used here.";

  expect_equality(e.space, dual, "classical dual");
  expect_equality(e.space, hardy, "classical hardy");
  expect_equality(e.space, rellich, "classical rellich");
  expect_e1(e.space, dual, "classical dual");
  return e;
}

IteratedLog iterated_log_potential(int k, double R) {
  require(k >= 1, "iterlog: k must be >= 1");
  require(k <= 4, "iterlog: k must be <= 4 (exp_[k-1](e) overflows double for k >= 5)");
  require(R > 0 && std::isfinite(R), "iterlog: R must be positive and finite");

  // log(r/t) = exp_[k-2](e) + log(R/t), which stays finite where r itself may not.
  const double head = k == 1 ? 1.0 : std::exp(k == 2 ? 1.0 : std::exp(k == 3 ? 1.0 : std::exp(1.0)));
  const Expression log_r_t = head + expr::log(expr::param(Param::R) / T());
  std::vector<Expression> logs;  // log_[i](r/t), i = 1..k
  for (int i = 1; i <= k; ++i) logs.push_back(expr::logk(i - 1, log_r_t));

  Expression Z, q, prod = expr::num(1.0);
  for (int j = 1; j <= k; ++j) {
    prod = prod * logs[j - 1];
    Z = Z + 1.0 / (tpow(2) * expr::pow(prod, 2.0));
    q = q - 0.5 / prod;
  }
  const Expression z = expr::sqrt(prod);

  Bindings params;
  params.set(Param::R, R).set(Param::k, k);
  const double r = k == 1 ? R * std::numbers::e : R * std::exp(head);
  if (std::isfinite(r)) params.set(Param::r, r);

  IteratedLog out;
  out.potential = PairSpec::bessel_potential(z, Z, 0.25, params)
                      .with_note("iterated logarithm potential, c = 1/4, r = R exp_[k-1](e)");
  out.r = r;
  out.q = q;
  double qb = 0.0, zb = 0.0;
  for (int j = 1; j < k; ++j) {
    qb += std::ldexp(1.0, -j);
    zb += std::ldexp(1.0, -2 * j);
  }
  qb += std::ldexp(1.0, -(k - 1));
  zb += std::ldexp(1.0, -2 * (k - 1));
  out.q_bound = -0.5 * qb;
  out.tz_bound = -0.25 * zb;
  return out;
}

Expression ell_iterated(int k, const Expression& x) {
  Expression cur = x;
  for (int i = 0; i < k; ++i) cur = 1.0 / (1.0 - expr::log(cur));
  return cur;
}

PairSpec ell_potential(int k, double R) {
  require(k >= 1, "ell-family: k must be >= 1");
  require(R > 0 && std::isfinite(R), "ell-family: R must be positive and finite");
  const Expression x = T() / expr::param(Param::R);
  Expression Z, prod = expr::num(1.0), cur = x;
  for (int j = 1; j <= k; ++j) {
    cur = 1.0 / (1.0 - expr::log(cur));
    prod = prod * cur;
    Z = Z + expr::pow(prod, 2.0) / tpow(2);
  }
  Bindings params;
  params.set(Param::R, R).set(Param::k, k);
  return PairSpec::bessel_potential(expr::pow(prod, -0.5), Z, 0.25, params)
      .with_note("iterated ell potential, ell(x) = 1/(1 - log x), c = 1/4");
}

Interpolation interpolation_constants(int n, double lambda) {
  const double top = (n - 1.0) * (n - 1.0) / 4.0;
  require(lambda >= 0 && lambda <= top, "lambda must lie in [0, (n-1)^2/4]");
  const double gamma = std::sqrt(std::max(0.0, (n - 1.0) * (n - 1.0) - 4.0 * lambda));
  return {gamma, (gamma + 1.0) / 2.0};
}

PairSpec hyperbolic_interpolation(int n, double kappa, double lambda) {
  require_hyperbolic(n, kappa);
  const auto [gamma, h] = interpolation_constants(n, lambda);
  const double a = n / 2.0 - h;
  const Expression H = a * ct() + h / T();
  const Expression V = lambda * expr::pow(K(), 2.0) + h * h / tpow(2) +
                       (n * n / 4.0 - h * h) * expr::pow(K(), 2.0) * inv_sinh(2) +
                       gamma * h * (T() * ct() - 1.0) / tpow(2);
  Bindings params = hyperbolic_params(n, kappa);
  params.set(Param::lambda, lambda);
  return PairSpec::dual(H, expr::num(1.0), V, params)
      .with_note("hyperbolic interpolation, gamma = " + fmt(gamma) + ", h = " + fmt(h));
}

Expression hyperbolic_interpolation_e1(int n, double h) {
  const double a = n / 2.0 - h;
  return a * expr::pow(K(), 2.0) + h * ((n - 3.0) * T() * ct() - 1.0) / tpow(2) +
         (n - 4.0) * a * expr::pow(ct(), 2.0);
}

Expression hyperbolic_lower_density(int n, int which) {
  const Expression k2 = expr::pow(K(), 2.0);
  switch (which) {
    case 1: {
      const double a = (n - 1) / 2.0;
      return a * a * k2 + 0.25 / tpow(2) + a * (a - 1) * k2 * inv_sinh(2);
    }
    case 2: {
      const double a = (n - 1) / 2.0;
      return 2.25 / tpow(4) - (n - 1.0) * ct() / tpow(3) + a * a * k2 / tpow(2) +
             a * (a - 1) * k2 * inv_sinh(2) / tpow(2);
    }
    case 3: {
      const double b = (n - 3) / 2.0;
      return 0.25 * inv_sinh(2) / tpow(2) + b * b * k2 * inv_sinh(2) + b * (b - 1) * k2 * inv_sinh(4);
    }
  }
  throw InvalidArgument("hyperbolic-lower: selector must be 1, 2 or 3");
}

PairSpec hyperbolic_lower(int n, double kappa, int which) {
  require(which >= 1 && which <= 3, "hyperbolic-lower: selector must be 1, 2 or 3");
  require_hyperbolic(n, kappa);
  const Bindings params = hyperbolic_params(n, kappa);
  const Expression k2 = expr::pow(K(), 2.0);
  const Expression D = hyperbolic_lower_density(n, which);
  switch (which) {
    case 1: {
      const double a = (n - 1) / 2.0;
      return PairSpec::primal(a * ct() - 0.5 / T(), expr::num(1.0), D, params)
          .with_note("w = 1, W = density");
    }
    case 2: {
      const double a = (n - 1) / 2.0;
      // W = t^2 D; negative near 0 term by term, nonnegative overall with margin (n-4)^2/4 t^-2.
      const Expression W = 2.25 / tpow(2) - (n - 1.0) * ct() / T() + a * a * k2 + a * (a - 1) * k2 * inv_sinh(2);
      return PairSpec::primal(a * ct() - 1.5 / T(), 1.0 / tpow(2), W, params)
          .with_signed_potential(true)
          .with_note("w = 1/t^2, W = t^2 density (u^2 restored in the ct term); W has a negative term");
    }
    default: {
      const double b = (n - 3) / 2.0;
      // W = sinh^2 D, simplified so that it stays finite where sinh overflows.
      const Expression W = 0.25 / tpow(2) + b * b * k2 + b * (b - 1) * k2 * inv_sinh(2);
      return PairSpec::primal(b * ct() - 0.5 / T(), inv_sinh(2), W, params, -2.0 * ct())
          .with_note("w = 1/sinh^2(kappa t), W = sinh^2 density");
    }
  }
}

Chain final_combined(int n, double kappa) {
  require_hyperbolic(n, kappa);
  const double nn = n, k2 = kappa * kappa, k4 = k2 * k2;
  Chain c;
  c.id = "hyp-final";
  c.dual = hyperbolic_interpolation(n, kappa, (nn - 1) * (nn - 1) / 4.0);
  c.links = {{"hyp-lower-1", (nn - 1) * (nn - 1) * k2 / 4.0, hyperbolic_lower(n, kappa, 1)},
             {"hyp-lower-2", 0.25, hyperbolic_lower(n, kappa, 2)},
             {"hyp-lower-3", (nn * nn - 1) * k2 / 4.0, hyperbolic_lower(n, kappa, 3)}};

  const double m1 = nn - 1;
  auto terms = [&](double u2, double ct_coef) -> std::vector<ChainTerm> {
    return {{"u^2", u2, expr::num(1.0)},
            {"u^2/t^2", m1 * m1 * k2 / 8.0, 1.0 / tpow(2)},
            {"u^2/(t^2 sinh^2)", m1 * m1 * k2 / 8.0, inv_sinh(2) / tpow(2)},
            {"u^2/sinh^2", m1 * (nn - 3) * (nn * nn - 2 * nn - 1) * k4 / 8.0, inv_sinh(2)},
            {"ct u^2/t^3", ct_coef, ct() / tpow(3)},
            {"u^2/sinh^4", (nn * nn - 1) * (nn - 3) * (nn - 5) * k4 / 16.0, inv_sinh(4)},
            {"u^2/t^4", 9.0 / 16.0, 1.0 / tpow(4)}};
  };
  c.final_terms = terms(m1 * m1 * m1 * m1 * k4 / 16.0, -m1 / 4.0);
  c.printed_terms = terms(m1 * m1 * m1 * m1 * k2 / 16.0, -m1 * kappa / 4.0);
  c.note =
      "composed coefficients: (n-1)^4 kappa^4/16 on u^2 and -(n-1)/4 on ct u^2/t^3; the usual display "
      "carries kappa^2 and -(n-1) kappa/4 there, which agree only at kappa = 1";
  return c;
}

Chain weighted_potential_chain(const PairSpec& potential, double lambda, int n, double R) {
  require(n >= 5, "dimension must be >= 5");
  require(lambda < n - 2.0, "lambda must be < n - 2");
  const auto& pot = potential.as_potential();
  const double nn = n, b = nn - lambda - 2.0;
  const PairSpec dual = pairs::from_bessel_potential(potential, PotentialConstruction::to_dual, n);
  const pairs::WeightedBesselPairs wp = pairs::weighted_bessel_pairs(potential, lambda, n);
  Chain c;
  c.id = "weighted-potential";
  c.dual = dual;
  c.links = {{"inverse-square", nn * nn / 4.0, pairs::from_bessel_pair(wp.first, n)},
             {"potential-weight", pot.c, pairs::weighted_pair_primal(potential, lambda, n)}};
  c.final_terms = {{"u^2/t^4", nn * nn * (nn - 4) * (nn - 4) / 16.0, 1.0 / tpow(4)},
                   {"Z u^2/t^2", pot.c * (nn * nn / 4.0 + b * b / 4.0), pot.Z / tpow(2)}};
  c.note = "lambda = " + fmt(lambda) + ", R = " + fmt(R);
  return c;
}

const std::vector<CatalogInfo>& catalog_list() {
  static const std::vector<CatalogInfo> list = {
      {"classical-rellich", "Euclidean Rellich chain: dual n/(2t), primal (n-4)/(2t) with weight n^2/(4t^2)", {"n", "R"}},
      {"iterlog", "iterated logarithm Bessel potential with its dual and the weighted Bessel pair chain",
       {"n", "k", "R", "lambda"}},
      {"ell-family", "iterated ell Bessel potential; E1 fails near R once k > n", {"n", "k", "R"}},
      {"hyp-interp", "hyperbolic dual pair interpolating lambda in [0, (n-1)^2/4]", {"n", "kappa", "lambda", "R"}},
      {"hyp-lower-1", "hyperbolic Hardy-type primal pair, w = 1", {"n", "kappa", "R"}},
      {"hyp-lower-2", "hyperbolic primal pair with w = 1/t^2 (signed W)", {"n", "kappa", "R"}},
      {"hyp-lower-3", "hyperbolic primal pair with w = 1/sinh^2(kappa t)", {"n", "kappa", "R"}},
      {"hyp-final", "hyperbolic Rellich chain combining hyp-interp at lambda = (n-1)^2/4 with hyp-lower-1..3",
       {"n", "kappa", "R"}},
  };
  return list;
}

CatalogEntry make_entry(std::string_view id, const CatalogParams& p) {
  const int n = p.n.value_or(5);
  if (id == "classical-rellich") return classical_euclidean(n, p.R.value_or(geometry::kInfinity));

  if (id == "iterlog") {
    const int k = p.k.value_or(1);
    const double R = p.R.value_or(1.0);
    const double lambda = p.lambda.value_or(2.0);
    require(n >= 5, "iterlog: dimension must be >= 5");
    IteratedLog il = iterated_log_potential(k, R);
    CatalogEntry e;
    e.id = "iterlog";
    e.space = SpaceForm(n, 0.0, R);
    e.parameters = {{"n", double(n), "n >= 5"},
                    {"k", double(k), "1 <= k <= 4"},
                    {"R", R, "R > 0"},
                    {"lambda", lambda, "lambda < n - 2"}};
    const PairSpec dual = pairs::from_bessel_potential(il.potential, PotentialConstruction::to_dual, n);
    e.specs = {{"potential", il.potential, {}},
               {"dual", dual, {Shape::delta_vs_gradrad}},
               {"primal", pairs::from_bessel_potential(il.potential, PotentialConstruction::to_primal, n),
                {Shape::gradrad_vs_usq}}};
    e.chain = weighted_potential_chain(il.potential, lambda, n, R);
    e.provenance = "iterated logarithm potential; r = R exp_[k-1](e) = " + fmt(il.r) +
                   "; the chain constant on Z u^2/t^2 is c (n^2/4 + (n-lambda-2)^2/4)";
    expect_equality(e.space, il.potential, "iterlog potential");
    expect_e1(e.space, dual, "iterlog dual");
    return e;
  }

  if (id == "ell-family") {
    const int k = p.k.value_or(1);
    const double R = p.R.value_or(1.0);
    const PairSpec pot = ell_potential(k, R);
    CatalogEntry e;
    e.id = "ell-family";
    e.space = SpaceForm(n, 0.0, R);
    e.parameters = {{"n", double(n), "n >= 2"}, {"k", double(k), "k >= 1"}, {"R", R, "R > 0"}};
    e.specs = {{"potential", pot, {}},
               {"dual", pairs::from_bessel_potential(pot, PotentialConstruction::to_dual, n),
                {Shape::delta_vs_gradrad}}};
    e.provenance = "iterated ell potential; E1 of the dual tends to (n-k)/2 at t = R";
    expect_equality(e.space, pot, "ell potential");
    return e;
  }

  const double kappa = p.kappa.value_or(1.0);
  const double R = p.R.value_or(geometry::kInfinity);
  require(R > 0, "R must be positive");
  auto base = [&](std::string eid) {
    CatalogEntry e;
    e.id = std::move(eid);
    e.space = SpaceForm(n, kappa, R);
    e.parameters = {{"n", double(n), "n >= 5"}, {"kappa", kappa, "kappa > 0"}, {"R", R, "R > 0"}};
    return e;
  };

  if (id == "hyp-interp") {
    const double lambda = p.lambda.value_or(0.0);
    CatalogEntry e = base("hyp-interp");
    e.parameters.push_back({"lambda", lambda, "0 <= lambda <= (n-1)^2/4"});
    const PairSpec dual = hyperbolic_interpolation(n, kappa, lambda);
    e.specs = {{"dual", dual, {Shape::delta_vs_gradrad}}};
    e.provenance = "hyperbolic interpolation dual pair with v = 1; dual Riccati equality, E1 > 0";
    expect_equality(e.space, dual, "hyp-interp dual");
    expect_e1(e.space, dual, "hyp-interp dual");
    return e;
  }

  for (int which = 1; which <= 3; ++which) {
    if (id != "hyp-lower-" + std::to_string(which)) continue;
    CatalogEntry e = base(std::string(id));
    const PairSpec primal = hyperbolic_lower(n, kappa, which);
    e.specs = {{"primal", primal, {Shape::gradrad_vs_usq}}};
    e.provenance = "hyperbolic lower bound, W = (right-hand density)/w";
    if (which == 2) e.provenance += "; the ct term carries u^2, and W is signed with margin (n-4)^2/(4t^2)";
    expect_equality(e.space, primal, e.id);
    if (which == 2) {
      const Bindings b = primal.bindings(e.space);
      const Expression W = primal.as_primal().W;
      expect_nonnegative(e.space, [&](double t) {
        const double v = expr::evaluate(W, b.at(t));
        return pairs::Sample{v, std::abs(v)};
      }, "hyp-lower-2 W");
    }
    return e;
  }

  if (id == "hyp-final") {
    CatalogEntry e = base("hyp-final");
    Chain c = final_combined(n, kappa);
    e.specs = {{"dual", c.dual, {Shape::delta_vs_gradrad}}};
    for (const ChainLink& l : c.links) e.specs.push_back({l.name, l.primal, {Shape::gradrad_vs_usq}});
    e.chain = std::move(c);
    e.provenance = "hyperbolic Rellich chain; coefficients composed from the links";
    return e;
  }

  throw InvalidArgument("unknown catalog id '" + std::string(id) + "'");
}

}  // namespace rellich::catalog
