#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rellich/geometry.hpp"

using namespace rellich;
using namespace rellich::geometry;

namespace {

constexpr double kPi = std::numbers::pi;

// Finite-difference Laplacian in polar coordinates:
// s^{1-n} d/dt (s^{n-1} u'), with u' itself by central differences.
template <class F>
double polar_fd_laplacian(const SpaceForm& sf, F u, double t, double h) {
  auto flux = [&](double x) {
    const double du = (u(x + h / 2) - u(x - h / 2)) / h;
    return std::pow(s_kappa(sf, x), sf.n - 1) * du;
  };
  return (flux(t + h / 2) - flux(t - h / 2)) / h / std::pow(s_kappa(sf, t), sf.n - 1);
}

}  // namespace

TEST_CASE("ct and L") {
  CHECK(ct(SpaceForm(3, 0), 2.0) == doctest::Approx(0.5));
  CHECK(ct(SpaceForm(3, 1), 1.0) == doctest::Approx(std::cosh(1.0) / std::sinh(1.0)).epsilon(1e-15));
  CHECK(ct(SpaceForm(3, 1), 50.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(big_l(SpaceForm(5, 0), 2.0) == doctest::Approx(2.0));
  CHECK(big_l(SpaceForm(5, 1), 1.0) == doctest::Approx(4.0 * std::cosh(1.0) / std::sinh(1.0)).epsilon(1e-15));
  CHECK(big_l(SpaceForm(5, 1), 1.0) == doctest::Approx(5.252141142).epsilon(1e-9));
  for (double k : {0.0, 0.5, 2.0}) CHECK(big_l(SpaceForm(2, k), 0.7) == ct(SpaceForm(2, k), 0.7));
  CHECK_THROWS_AS(ct(SpaceForm(3, 1), 0.0), InvalidArgument);
  CHECK_THROWS_AS(big_l(SpaceForm(3, 0), -1.0), InvalidArgument);
  CHECK_THROWS_AS(SpaceForm(1, 0), InvalidArgument);
  CHECK_THROWS_AS(SpaceForm(3, -1), InvalidArgument);
  CHECK_THROWS_AS(SpaceForm(3, 0, 0.0), InvalidArgument);
}

TEST_CASE("volume weight") {
  // omega_2 = 4 pi, omega_1 = 2 pi from the Gamma formula
  CHECK(sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  CHECK(volume_weight(SpaceForm(3, 0), 2.0) == doctest::Approx(16 * kPi).epsilon(1e-14));
  CHECK(volume_weight(SpaceForm(3, 0), 2.0) == doctest::Approx(50.26548).epsilon(1e-7));
  CHECK(volume_weight(SpaceForm(2, 0), 1.0) == doctest::Approx(2 * kPi).epsilon(1e-15));
  const double sh = std::sinh(1.0);
  CHECK(volume_weight(SpaceForm(3, 1), 1.0) == doctest::Approx(4 * kPi * sh * sh).epsilon(1e-14));
  CHECK(volume_weight(SpaceForm(3, 1), 1.0) == doctest::Approx(17.3553874).epsilon(1e-8));
  CHECK(sphere_area(5) == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-14));
}

TEST_CASE("property: space-form invariants") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> radius(0.05, 10.0);
  std::uniform_real_distribution<double> curvature(0.01, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double t = radius(rng);
    const SpaceForm hyp(5, curvature(rng));
    CHECK(ct(hyp, t) * t > 1.0);
    CHECK(ct(SpaceForm(5, 0), t) * t == doctest::Approx(1.0));
    // ct' = kappa^2 - ct^2 against a central difference
    const double h = 1e-6 * t;
    const double fd = (ct(hyp, t + h) - ct(hyp, t - h)) / (2 * h);
    CHECK(ct_prime(hyp, t) == doctest::Approx(fd).epsilon(1e-6));
    // weight increasing in t
    for (int n : {2, 3, 5, 8}) {
      const SpaceForm sf(n, hyp.kappa);
      CHECK(volume_weight(sf, t * 1.01) > volume_weight(sf, t));
    }
  }
  for (double t = 0.1; t <= 10.0; t += 0.37) {
    for (int n : {2, 3, 5}) {
      const double euclid = volume_weight(SpaceForm(n, 0), t);
      const double rel = std::abs(volume_weight(SpaceForm(n, 1e-4), t) - euclid) / euclid;
      CHECK(rel <= 1e-6);
    }
  }
}

TEST_CASE("radial laplacian") {
  // u = t^2, Euclidean Delta |x|^2 = 2n
  const Jet sq{1.0, 2.0, 2.0};
  CHECK(radial_laplacian(SpaceForm(3, 0), sq, 1.0) == doctest::Approx(6.0));
  const double expected = 2.0 + 4.0 * std::cosh(1.0) / std::sinh(1.0);
  CHECK(radial_laplacian(SpaceForm(3, 1), sq, 1.0) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(7.2521).epsilon(1e-4));
  // formula vs. polar finite differences
  const SpaceForm hyp(3, 1);
  CHECK(polar_fd_laplacian(hyp, [](double x) { return x * x; }, 1.0, 1e-4) == doctest::Approx(expected).epsilon(1e-6));

  const SpaceForm sf(5, 0.7, 4.0);
  const RadialTestFunction bump = make_bump(0.5, 2.0, sf);
  CHECK(radial_laplacian(sf, bump, 1.25) == 0.0);  // plateau
  const double fd = polar_fd_laplacian(sf, [&](double x) { return bump.value(x); }, 0.8, 1e-4);
  CHECK(radial_laplacian(sf, bump, 0.8) == doctest::Approx(fd).epsilon(1e-5));
  CHECK_THROWS_AS(radial_laplacian(sf, bump.with_mode(1), 0.8), InvalidArgument);
}

TEST_CASE("separated laplacian") {
  const SpaceForm sf(5, 0.5, 10.0);
  const RadialTestFunction u = make_bump(0.3, 3.0, sf);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> r(0.31, 2.99);
  for (int i = 0; i < 10; ++i) {
    const double t = r(rng);
    CHECK(separated_laplacian(sf, u, t) == radial_laplacian(sf, u, t));
  }
  CHECK(angular_eigenvalue(1, 5) == 4.0);
  CHECK(angular_eigenvalue(2, 4) == 8.0);
  CHECK(angular_eigenvalue(1, 3) == 2.0);
  const double t = 1.1;
  const Jet j = u.jet(t);
  const double s = s_kappa(SpaceForm(4, 0.5), t);
  CHECK(separated_laplacian(SpaceForm(4, 0.5, 10.0), u.with_mode(2), t) ==
        doctest::Approx(j.d2 + 3 * ct(sf, t) * j.d1 - 8 * j.value / (s * s)).epsilon(1e-14));

  // Brute-force 3-D grid Laplacian of phi(|x|) x1/|x|, kappa = 0, n = 3.
  const SpaceForm e3(3, 0, 10.0);
  const RadialTestFunction phi = make_bump(0.2, 1.6, e3, 1);
  auto field = [&](double x, double y, double z) {
    const double rr = std::sqrt(x * x + y * y + z * z);
    return phi.value(rr) * x / rr;
  };
  const double px = 0.5, py = 0.3, pz = 0.25;
  const double h = 1e-3;
  const double lap = (field(px + h, py, pz) + field(px - h, py, pz) + field(px, py + h, pz) + field(px, py - h, pz) +
                      field(px, py, pz + h) + field(px, py, pz - h) - 6 * field(px, py, pz)) /
                     (h * h);
  const double rr = std::sqrt(px * px + py * py + pz * pz);
  CHECK(separated_laplacian(e3, phi, rr) * px / rr == doctest::Approx(lap).epsilon(1e-3));
}

TEST_CASE("test functions") {
  const SpaceForm sf(5, 0, 10.0);
  const RadialTestFunction u = make_bump(1.0, 4.0, sf);
  for (double x : {1.0, 4.0}) {
    const Jet j = u.jet(x);
    CHECK(j.value == 0.0);
    CHECK(j.d1 == 0.0);
    CHECK(j.d2 == 0.0);
  }
  CHECK(u.value(2.0) == 1.0);
  CHECK(u.value(3.0) == 1.0);
  CHECK(u.value(0.5) == 0.0);
  CHECK(u.value(5.0) == 0.0);
  double mx = 0;
  for (double x = 1.0; x <= 4.0; x += 1e-3) mx = std::max(mx, u.value(x));
  CHECK(mx == 1.0);

  CHECK_THROWS_AS(make_bump(0.0, 1.0, sf), InvalidArgument);
  CHECK_THROWS_AS(make_bump(2.0, 1.0, sf), InvalidArgument);
  CHECK_THROWS_AS(make_bump(1.0, 11.0, sf), InvalidArgument);
  CHECK_THROWS_AS(make_powerlaw(-1, 0.5, 2.0, 0.6, 0.5, sf), InvalidArgument);
  CHECK_THROWS_AS(make_powerlaw(-1, 0.5, 9.0, 0.1, 2.0, sf), InvalidArgument);

  const RadialTestFunction flat = make_powerlaw(0.0, 1.0, 2.0, 0.5, 0.5, sf);
  CHECK(flat.value(1.5) == 1.0);
  const SpaceForm sf6(6, 0, 100.0);
  const RadialTestFunction inv = make_powerlaw(-(6 - 4) / 2.0, 1.0, 8.0, 0.5, 1.0, sf6);
  for (double x : {1.0, 2.5, 8.0}) {
    CHECK(inv.value(x) == doctest::Approx(1.0 / x).epsilon(1e-15));
    CHECK(inv.jet(x).d1 == doctest::Approx(-1.0 / (x * x)).epsilon(1e-14));
    CHECK(inv.jet(x).d2 == doctest::Approx(2.0 / (x * x * x)).epsilon(1e-14));
  }
  CHECK(u.scaled(2.0).jet(1.3).d2 == doctest::Approx(2.0 * u.jet(1.3).d2));
}

TEST_CASE("property: test functions are C^2 across their knots") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(0, 1);
  const SpaceForm sf(5, 1.0, 200.0);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.1 + 5 * unit(rng);
    const double b = a * (1.1 + 3 * unit(rng));
    const RadialTestFunction bump = make_bump(a, b, sf);
    const RadialTestFunction pl = make_powerlaw(-3 + 6 * unit(rng), a, b, a * (0.05 + 0.9 * unit(rng)),
                                                b * (0.05 + 0.5 * unit(rng)), sf);
    for (const RadialTestFunction* u : {&bump, &pl}) {
      double scale = 0;
      for (int k = 0; k <= 200; ++k) {
        const double x = u->support_begin() + (u->support_end() - u->support_begin()) * k / 200.0;
        scale = std::max(scale, std::abs(u->jet(x).d2));
      }
      for (double knot : u->knots()) {
        const double d = knot * 1e-13;
        const Jet lo = u->jet(knot - d), hi = u->jet(knot + d);
        CHECK(std::abs(lo.d2 - hi.d2) <= 1e-9 * std::max(1.0, scale));
        CHECK(std::abs(lo.d1 - hi.d1) <= 1e-9 * std::max(1.0, scale));
        CHECK(std::abs(lo.value - hi.value) <= 1e-9 * std::max(1.0, scale));
      }
      CHECK(u->jet(u->support_begin() * 0.999).value == 0.0);
      CHECK(u->jet(u->support_end() * 1.001).value == 0.0);
    }
  }
}
