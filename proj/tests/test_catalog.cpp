#include <cmath>
#include <random>

#include "doctest.h"
#include "rellich/catalog.hpp"

using namespace rellich;
using namespace rellich::catalog;
using expr::Param;
using pairs::log_grid;

namespace {

double eval_at(const Expression& e, const Bindings& b, double t) { return expr::evaluate(e, b.at(t)); }

double max_residual(const SpaceForm& sf, const PairSpec& p, int count) {
  const auto [lo, hi] = pairs::scan_interval(sf, {});
  double m = 0;
  for (double t : log_grid(lo, hi, count)) m = std::max(m, std::abs(pairs::defining_residual(sf, p, t).relative()));
  return m;
}

}  // namespace

TEST_CASE("classical entry") {
  const CatalogEntry e6 = classical_euclidean(6);
  REQUIRE(e6.chain);
  CHECK(e6.chain->final_terms.at(0).coefficient == doctest::Approx(9.0));
  const CatalogEntry e5 = classical_euclidean(5);
  CHECK(e5.chain->links.at(0).coefficient * eval_at(e5.spec("rellich").as_primal().w, e5.spec("rellich").params(), 1.0) ==
        doctest::Approx(6.25));
  CHECK_THROWS_AS(classical_euclidean(4), InvalidArgument);
  for (const char* role : {"dual", "hardy", "rellich"}) CHECK(max_residual(e6.space, e6.spec(role), 10000) <= 1e-9);
  // W follows from substitution, not from the n^2(n-4)^2/(16 t^4) parenthetical.
  CHECK(eval_at(e6.spec("rellich").as_primal().W, e6.spec("rellich").params(), 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(e6.spec("nope"), InvalidArgument);
}

TEST_CASE("iterated logarithm potential") {
  const IteratedLog il = iterated_log_potential(1, 1.0);
  CHECK(il.r == doctest::Approx(std::exp(1.0)));
  const Bindings b = il.potential.params();
  CHECK(eval_at(il.potential.as_potential().Z, b, 1.0) == doctest::Approx(1.0));
  CHECK(eval_at(il.q, b, 1.0 - 1e-12) == doctest::Approx(-0.5).epsilon(1e-9));
  for (double t : log_grid(1e-6, 1.0, 200)) {
    const double q = eval_at(il.q, b, t);
    CHECK(q < 0);
    CHECK(q > -1);
    // q = t z'/z
    const auto& p = il.potential.as_potential();
    CHECK(q == doctest::Approx(t * eval_at(p.dz, b, t) / eval_at(p.z, b, t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(iterated_log_potential(0, 1.0), InvalidArgument);

  for (int k = 1; k <= 4; ++k) {
    const IteratedLog ik = iterated_log_potential(k, 2.0);
    const Bindings bk = ik.potential.params();
    std::mt19937_64 rng(k);
    std::uniform_real_distribution<double> u(-12.0, 0.0);
    for (int i = 0; i < 20; ++i) {
      const double t = 2.0 * std::exp(u(rng));
      CHECK(std::abs(pairs::bessel_potential_residual_terms(ik.potential, t).relative()) <= 1e-9);
      CHECK(eval_at(ik.q, bk, t) >= ik.q_bound - 1e-12);
      CHECK(-t * t * eval_at(ik.potential.as_potential().Z, bk, t) / 4.0 >= ik.tz_bound - 1e-12);
      // E1 t^2 = -q^2 + (n-4) q + n(n-4)/2 - t^2 Z/4 for the dual of the potential.
      const int n = 5;
      const SpaceForm sf(n, 0.0, 2.0);
      const PairSpec dual = pairs::from_bessel_potential(ik.potential, pairs::PotentialConstruction::to_dual, n);
      const double q = eval_at(ik.q, bk, t);
      const double rhs = -q * q + (n - 4) * q + n * (n - 4) / 2.0 - t * t * eval_at(ik.potential.as_potential().Z, bk, t) / 4.0;
      CHECK(pairs::e1(sf, dual, t) * t * t == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(iterated_log_potential(5, 1.0), InvalidArgument);
}

TEST_CASE("iterated logarithm entry and chain") {
  CatalogParams cp;
  cp.n = 6;
  cp.k = 1;
  cp.R = 1.0;
  const CatalogEntry e = make_entry("iterlog", cp);
  REQUIRE(e.chain);
  const Chain& c = *e.chain;
  CHECK(c.final_terms.at(0).coefficient == doctest::Approx(9.0));
  // c (n^2/4 + (n-lambda-2)^2/4) at c = 1/4, n = 6, lambda = 2
  CHECK(c.final_terms.at(1).coefficient == doctest::Approx(2.5));
  // weights compose: v V = sum c_i w_i, and the composed density matches the final terms
  const Bindings b = c.dual.bindings(e.space);
  const Expression weights = chain_weight_sum(c);
  const Expression composed = chain_composed_density(c);
  const Expression final_density = terms_density(c.final_terms);
  for (double t : log_grid(1e-4, 0.999, 50)) {
    CHECK(eval_at(weights, b, t) == doctest::Approx(eval_at(c.dual.as_dual().V, b, t)).epsilon(1e-12));
    CHECK(eval_at(composed, b, t) == doctest::Approx(eval_at(final_density, b, t)).epsilon(1e-12));
  }
  CHECK(max_residual(e.space, c.links.at(0).primal, 2000) <= 1e-9);
  // second link is admissible but not an equality
  const auto [lo, hi] = pairs::scan_interval(e.space, {});
  for (double t : log_grid(lo, hi, 200))
    CHECK(pairs::riccati_residual_terms(e.space, c.links.at(1).primal, t).relative() >= -1e-9);
}

TEST_CASE("ell family") {
  CHECK(expr::evaluate(ell_iterated(3, expr::num(1.0)), Bindings{}) == doctest::Approx(1.0));
  for (int k : {1, 2, 5}) {
    const PairSpec p = ell_potential(k, 1.0);
    for (double t : log_grid(1e-6, 1.0, 50))
      CHECK(std::abs(pairs::bessel_potential_residual_terms(p, t).relative()) <= 1e-9);
  }
  const SpaceForm sf(5, 0.0, 1.0);
  auto e1_limit = [&](int k) {
    const PairSpec dual = pairs::from_bessel_potential(ell_potential(k, 1.0), pairs::PotentialConstruction::to_dual, 5);
    return pairs::limit_at([&](double t) { return pairs::e1(sf, dual, t); }, 1.0, 10);
  };
  // At t = R every ell_[i] is 1, so t z'/z -> -k/2 and t^2 Z -> k, giving
  // E1(R) R^2 = n(n-4)/2 - (n-4)k/2 - k(k+1)/4.
  auto closed = [](int n, int k) { return n * (n - 4) / 2.0 - (n - 4) * k / 2.0 - k * (k + 1) / 4.0; };
  for (int k : {1, 2, 3, 6}) {
    const auto l = e1_limit(k);
    REQUIRE(l);
    CHECK(*l == doctest::Approx(closed(5, k)).epsilon(1e-6));
  }
  CHECK(closed(5, 3) == -2.0);
  CHECK(closed(5, 6) == -11.0);
  CatalogParams cp;
  cp.n = 5;
  cp.k = 6;
  const CatalogEntry e = make_entry("ell-family", cp);
  const PairSpec& dual = e.spec("dual");
  const auto rep = pairs::scan_positivity([&](double t) { return pairs::e1_terms(e.space, dual, t); }, e.space, {}, "E1");
  CHECK(rep.verdict == pairs::Verdict::violated);
  REQUIRE(!rep.sign_changes.empty());
  CHECK(rep.sign_changes.back().t2 > 0.5);
  CHECK_THROWS_AS(ell_potential(0, 1.0), InvalidArgument);
}

TEST_CASE("hyperbolic interpolation") {
  const PairSpec p = hyperbolic_interpolation(5, 1.0, 1.0);
  const SpaceForm sf(5, 1.0);
  for (double t : {0.1, 1.0, 10.0}) CHECK(std::abs(pairs::dual_riccati_residual_terms(sf, p, t).relative()) <= 1e-9);
  const auto ic = interpolation_constants(5, 1.0);
  CHECK(ic.gamma == doctest::Approx(std::sqrt(12.0)));
  CHECK(ic.h == doctest::Approx((std::sqrt(12.0) + 1) / 2));
  CHECK(expr::fd_check(p.as_dual().H, p.params().at(2.0), 1e-6) <= 1e-6);
  CHECK_THROWS_AS(hyperbolic_interpolation(5, 1.0, 4.5), InvalidArgument);
  CHECK_THROWS_AS(hyperbolic_interpolation(5, 1.0, -0.1), InvalidArgument);
  CHECK_THROWS_AS(hyperbolic_interpolation(4, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(hyperbolic_interpolation(5, 0.0, 0.0), InvalidArgument);

  // E1 closed form and positivity over the interval of lambda
  for (int n : {5, 6, 9}) {
    for (double frac : {0.0, 0.3, 0.7, 1.0}) {
      const double lambda = frac * (n - 1.0) * (n - 1.0) / 4.0;
      for (double kappa : {0.5, 1.0, 3.0}) {
        const PairSpec d = hyperbolic_interpolation(n, kappa, lambda);
        const SpaceForm s(n, kappa);
        const Expression e1 = hyperbolic_interpolation_e1(n, interpolation_constants(n, lambda).h);
        const Bindings b = d.bindings(s);
        for (double t : log_grid(1e-3, 1e2, 60)) {
          const auto v = pairs::e1_terms(s, d, t);
          CHECK(v.value == doctest::Approx(eval_at(e1, b, t)).epsilon(1e-9));
          CHECK(v.value > 0);
          CHECK(std::abs(pairs::dual_riccati_residual_terms(s, d, t).relative()) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("interpolation endpoints match the closed forms") {
  for (int n : {5, 7}) {
    const double kappa = 1.3;
    const SpaceForm sf(n, kappa);
    Bindings b;
    b.set(Param::n, n).set(Param::kappa, kappa);
    const Expression v0 = expr::parse("n^2/(4*t^2) + n*(n-1)/2*(t*ct(t) - 1)/t^2");
    const Expression v1 = expr::parse("(n-1)^2*kappa^2/4 + 1/(4*t^2) + (n^2-1)*kappa^2/4/sinh(kappa*t)^2");
    const PairSpec p0 = hyperbolic_interpolation(n, kappa, 0.0);
    const PairSpec p1 = hyperbolic_interpolation(n, kappa, (n - 1.0) * (n - 1.0) / 4.0);
    for (double t : log_grid(1e-2, 20.0, 100)) {
      const double a0 = eval_at(p0.as_dual().V, p0.bindings(sf), t), e0 = eval_at(v0, b, t);
      const double a1 = eval_at(p1.as_dual().V, p1.bindings(sf), t), e1 = eval_at(v1, b, t);
      CHECK(std::abs(a0 - e0) <= 1e-12 * std::max(1.0, std::abs(e0)));
      CHECK(std::abs(a1 - e1) <= 1e-12 * std::max(1.0, std::abs(e1)));
      CHECK(eval_at(p0.as_dual().H, p0.bindings(sf), t) == doctest::Approx(n / (2.0 * t)));
    }
  }
}

TEST_CASE("interpolation tends to the Euclidean pair as kappa vanishes") {
  const int n = 6;
  const double kappa = 1e-6;
  const PairSpec p = hyperbolic_interpolation(n, kappa, 0.0);
  const Bindings b = p.bindings(SpaceForm(n, kappa));
  for (double t : log_grid(0.1, 10.0, 100)) {
    const double euclid = n * n / (4.0 * t * t);
    CHECK(std::abs(eval_at(p.as_dual().V, b, t) - euclid) <= 1e-4 * euclid);
  }
}

TEST_CASE("hyperbolic lower bounds") {
  for (int n : {5, 6, 8}) {
    for (double kappa : {0.5, 1.0, 2.0}) {
      const SpaceForm sf(n, kappa);
      for (int which = 1; which <= 3; ++which) {
        const PairSpec p = hyperbolic_lower(n, kappa, which);
        CHECK(max_residual(sf, p, 2000) <= 1e-9);
        // w W equals the density of the right side
        const double tt = 0.7;
        const Bindings b = p.bindings(sf);
        CHECK(eval_at(p.as_primal().w, b, tt) * eval_at(p.as_primal().W, b, tt) ==
              doctest::Approx(eval_at(hyperbolic_lower_density(n, which), b, tt)).epsilon(1e-12));
      }
    }
  }
  const PairSpec w2 = hyperbolic_lower(5, 1.0, 2);
  CHECK(w2.signed_potential());
  const auto rep = pairs::scan_positivity(w2.as_primal().W, w2.params(), SpaceForm(5, 1.0),
                                          {.lo = 1e-4, .hi = 20.0}, "W");
  CHECK(rep.verdict == pairs::Verdict::nonnegative);
  // margin (n-4)^2/4 t^-2 near 0
  const Bindings b = w2.params();
  CHECK(eval_at(w2.as_primal().W, b, 1e-4) * 1e-8 == doctest::Approx(0.25).epsilon(1e-3));
  CHECK_THROWS_AS(hyperbolic_lower(5, 1.0, 4), InvalidArgument);
  // (n-5) kills the sinh^-4 term
  CHECK(eval_at(hyperbolic_lower(5, 1.0, 3).as_primal().W, hyperbolic_lower(5, 1.0, 3).params(), 2.0) ==
        doctest::Approx(0.25 / 4.0 + 1.0));
}

TEST_CASE("hyperbolic final chain") {
  const Chain c = final_combined(5, 1.0);
  CHECK(c.final_terms.at(0).coefficient == doctest::Approx(16.0));
  CHECK(c.final_terms.at(5).coefficient == 0.0);
  for (double kappa : {0.5, 1.0, 2.0}) {
    for (int n : {5, 6, 9}) {
      const Chain ch = final_combined(n, kappa);
      const SpaceForm sf(n, kappa);
      const Bindings b = ch.dual.bindings(sf);
      const Expression composed = chain_composed_density(ch);
      const Expression printed = terms_density(ch.final_terms);
      for (double t : log_grid(1e-2, 10.0, 40)) {
        CHECK(eval_at(chain_weight_sum(ch), b, t) == doctest::Approx(eval_at(ch.dual.as_dual().V, b, t)).epsilon(1e-12));
        CHECK(eval_at(composed, b, t) == doctest::Approx(eval_at(printed, b, t)).epsilon(1e-10));
      }
    }
  }
  // the usual display agrees with the composition only at kappa = 1
  const Chain c2 = final_combined(5, 2.0);
  CHECK(c2.final_terms.at(0).coefficient != doctest::Approx(c2.printed_terms.at(0).coefficient));
  CHECK(c.final_terms.at(0).coefficient == doctest::Approx(c.printed_terms.at(0).coefficient));
  CHECK_THROWS_AS(final_combined(4, 1.0), InvalidArgument);
}

TEST_CASE("catalog ids build with defaults") {
  for (const CatalogInfo& info : catalog_list()) {
    const CatalogEntry e = make_entry(info.id);
    CHECK(e.id == info.id);
    CHECK(!e.specs.empty());
  }
  CHECK_THROWS_AS(make_entry("nope"), InvalidArgument);
}

TEST_CASE("catalog expressions have consistent derivatives") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  for (const CatalogInfo& info : catalog_list()) {
    CatalogParams cp;
    cp.R = info.id == "iterlog" || info.id == "ell-family" ? 20.0 : 50.0;
    const CatalogEntry e = make_entry(info.id, cp);
    for (const NamedSpec& s : e.specs) {
      std::vector<Expression> exprs;
      switch (s.spec.kind()) {
        case pairs::PairKind::primal: exprs = {s.spec.as_primal().G, s.spec.as_primal().w, s.spec.as_primal().W}; break;
        case pairs::PairKind::dual: exprs = {s.spec.as_dual().H, s.spec.as_dual().v, s.spec.as_dual().V}; break;
        case pairs::PairKind::bessel_potential: exprs = {s.spec.as_potential().z, s.spec.as_potential().Z}; break;
        case pairs::PairKind::bessel_pair: exprs = {s.spec.as_bessel_pair().X, s.spec.as_bessel_pair().Y}; break;
      }
      const Bindings b = s.spec.bindings(e.space);
      for (const Expression& x : exprs) {
        for (int i = 0; i < 20; ++i) {
          const double t = std::exp(u(rng));
          const double d = expr::evaluate(expr::differentiate(x), b.at(t));
          CHECK(expr::fd_check(x, b.at(t), 1e-6 * t) <= 1e-5 * (1 + std::abs(d)));
        }
      }
    }
  }
}
