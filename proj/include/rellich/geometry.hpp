#pragma once

// Space-form quantities in geodesic polar coordinates around a base point and
// compactly supported C^2 test profiles.

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "rellich/expr.hpp"

namespace rellich::geometry {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Model space of constant sectional curvature -kappa^2 restricted to the
/// geodesic ball of radius R around the base point.
struct SpaceForm {
  int n = 2;
  double kappa = 0.0;
  double R = kInfinity;

  SpaceForm() = default;
  SpaceForm(int dimension, double curvature, double radius = kInfinity);

  bool euclidean() const { return kappa == 0.0; }
  /// Bindings carrying n, kappa and R.
  expr::Bindings bindings() const;
};

/// 1/t for kappa = 0, kappa*coth(kappa*t) otherwise.
double ct(const SpaceForm& sf, double t);
/// d/dt ct = kappa^2 - ct^2.
double ct_prime(const SpaceForm& sf, double t);
/// (n-1) ct(t), the Laplacian of the distance function.
double big_l(const SpaceForm& sf, double t);
/// t for kappa = 0, sinh(kappa t)/kappa otherwise.
double s_kappa(const SpaceForm& sf, double t);
/// Area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);
/// omega_{n-1} s_kappa(t)^{n-1}; dx_kappa = volume_weight(t) dt dsigma / omega_{n-1}.
double volume_weight(const SpaceForm& sf, double t);
/// Eigenvalue l(l+n-2) of -Delta on the unit (n-1)-sphere.
double angular_eigenvalue(int l, int n);

/// Value and first two derivatives of a radial profile at a point.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// u'' + L_kappa u' for a radial function with the given jet.
double radial_laplacian(const SpaceForm& sf, const Jet& u, double t);

enum class ProfileKind { bump, powerlaw };

/// Compactly supported C^2 profile phi, optionally times a degree-l spherical
/// harmonic normalised so that its mean square over the sphere is 1.
class RadialTestFunction {
 public:
  ProfileKind kind() const { return kind_; }
  int mode() const { return l_; }
  double alpha() const { return alpha_; }
  double amplitude() const { return amplitude_; }
  /// Plateau interval [a, b].
  double plateau_begin() const { return a_; }
  double plateau_end() const { return b_; }
  double support_begin() const { return knots_.front(); }
  double support_end() const { return knots_.back(); }
  /// Points between which the profile is smooth, ascending.
  const std::array<double, 4>& knots() const { return knots_; }

  Jet jet(double t) const;
  double value(double t) const { return jet(t).value; }

  RadialTestFunction scaled(double s) const;
  RadialTestFunction with_mode(int l) const;
  /// One-line human readable description.
  std::string describe() const;

  friend RadialTestFunction make_bump(double a, double b, const SpaceForm& sf, int l);
  friend RadialTestFunction make_powerlaw(double alpha, double a, double b, double w_in, double w_out,
                                          const SpaceForm& sf, int l);

 private:
  ProfileKind kind_ = ProfileKind::bump;
  double a_ = 0.0, b_ = 0.0;
  double alpha_ = 0.0;
  double amplitude_ = 1.0;
  int l_ = 0;
  std::array<double, 4> knots_{};
};

/// C^2 quintic-smoothstep bump supported on [a, b], identically 1 on the middle third.
RadialTestFunction make_bump(double a, double b, const SpaceForm& sf, int l = 0);
/// t^alpha on [a, b] tapered to 0 over [a - w_in, a] and [b, b + w_out].
RadialTestFunction make_powerlaw(double alpha, double a, double b, double w_in, double w_out, const SpaceForm& sf,
                                 int l = 0);

/// Radial Laplacian of an l = 0 test function; throws for l >= 1.
double radial_laplacian(const SpaceForm& sf, const RadialTestFunction& u, double t);
/// phi'' + L phi' - mu_l phi / s_kappa^2, the radial factor of Delta(phi Y_l).
double separated_laplacian(const SpaceForm& sf, const RadialTestFunction& u, double t);

/// Quintic smoothstep S(x) = 6x^5 - 15x^4 + 10x^3 with derivatives, clamped to [0, 1].
Jet smoothstep(double x);

}  // namespace rellich::geometry
