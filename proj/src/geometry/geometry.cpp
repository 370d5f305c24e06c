#include <cmath>
#include <numbers>
#include <sstream>

#include "rellich/geometry.hpp"

namespace rellich::geometry {

namespace {

void require_radius(double t, const char* what) {
  if (!(t > 0)) throw InvalidArgument(std::string(what) + ": radius must be positive");
}

}  // namespace

SpaceForm::SpaceForm(int dimension, double curvature, double radius) : n(dimension), kappa(curvature), R(radius) {
  if (n < 2) throw InvalidArgument("space form dimension must be >= 2");
  if (!(kappa >= 0) || !std::isfinite(kappa)) throw InvalidArgument("curvature parameter kappa must be >= 0");
  if (!(R > 0)) throw InvalidArgument("domain radius R must be positive");
}

expr::Bindings SpaceForm::bindings() const {
  expr::Bindings b;
  b.set(expr::Param::n, n).set(expr::Param::kappa, kappa);
  if (std::isfinite(R)) b.set(expr::Param::R, R);
  return b;
}

double ct(const SpaceForm& sf, double t) {
  require_radius(t, "ct");
  if (sf.kappa == 0.0) return 1.0 / t;
  return sf.kappa / std::tanh(sf.kappa * t);
}

double ct_prime(const SpaceForm& sf, double t) {
  const double c = ct(sf, t);
  return sf.kappa * sf.kappa - c * c;
}

double big_l(const SpaceForm& sf, double t) { return (sf.n - 1) * ct(sf, t); }

double s_kappa(const SpaceForm& sf, double t) {
  require_radius(t, "s_kappa");
  if (sf.kappa == 0.0) return t;
  return std::sinh(sf.kappa * t) / sf.kappa;
}

double sphere_area(int n) {
  if (n < 1) throw InvalidArgument("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double volume_weight(const SpaceForm& sf, double t) {
  require_radius(t, "volume_weight");
  return sphere_area(sf.n) * std::pow(s_kappa(sf, t), sf.n - 1);
}

double angular_eigenvalue(int l, int n) {
  if (l < 0) throw InvalidArgument("angular mode must be >= 0");
  return static_cast<double>(l) * (l + n - 2);
}

double radial_laplacian(const SpaceForm& sf, const Jet& u, double t) { return u.d2 + big_l(sf, t) * u.d1; }

Jet smoothstep(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  const double x2 = x * x;
  const double x3 = x2 * x;
  return {x3 * (10.0 + x * (-15.0 + 6.0 * x)), 30.0 * x2 * (x - 1.0) * (x - 1.0),
          60.0 * x * (2.0 * x - 1.0) * (x - 1.0)};
}

RadialTestFunction make_bump(double a, double b, const SpaceForm& sf, int l) {
  if (!(a > 0) || !(a < b) || !(b < sf.R))
    throw InvalidArgument("make_bump: require 0 < a < b < R");
  if (l < 0) throw InvalidArgument("make_bump: angular mode must be >= 0");
  RadialTestFunction u;
  u.kind_ = ProfileKind::bump;
  u.a_ = a;
  u.b_ = b;
  u.l_ = l;
  const double third = (b - a) / 3.0;
  u.knots_ = {a, a + third, b - third, b};
  return u;
}

RadialTestFunction make_powerlaw(double alpha, double a, double b, double w_in, double w_out, const SpaceForm& sf,
                                 int l) {
  if (!(w_in > 0) || !(w_out > 0)) throw InvalidArgument("make_powerlaw: transition widths must be positive");
  if (!(a - w_in > 0) || !(a < b) || !(b + w_out < sf.R))
    throw InvalidArgument("make_powerlaw: require 0 < a - w_in, a < b, b + w_out < R");
  if (!std::isfinite(alpha)) throw InvalidArgument("make_powerlaw: exponent must be finite");
  if (l < 0) throw InvalidArgument("make_powerlaw: angular mode must be >= 0");
  RadialTestFunction u;
  u.kind_ = ProfileKind::powerlaw;
  u.a_ = a;
  u.b_ = b;
  u.alpha_ = alpha;
  u.l_ = l;
  u.knots_ = {a - w_in, a, b, b + w_out};
  return u;
}

Jet RadialTestFunction::jet(double t) const {
  const double lo = knots_[0], k1 = knots_[1], k2 = knots_[2], hi = knots_[3];
  if (t <= lo || t >= hi) return {};
  // cutoff chi and its derivatives
  Jet chi{1.0, 0.0, 0.0};
  if (t < k1) {
    const double w = k1 - lo;
    const Jet s = smoothstep((t - lo) / w);
    chi = {s.value, s.d1 / w, s.d2 / (w * w)};
  } else if (t > k2) {
    const double w = hi - k2;
    const Jet s = smoothstep((hi - t) / w);
    chi = {s.value, -s.d1 / w, s.d2 / (w * w)};
  }
  Jet u = chi;
  if (kind_ == ProfileKind::powerlaw && alpha_ != 0.0) {
    const double p = std::pow(t, alpha_);
    const double p1 = alpha_ * p / t;
    const double p2 = alpha_ * (alpha_ - 1.0) * p / (t * t);
    u = {p * chi.value, p1 * chi.value + p * chi.d1, p2 * chi.value + 2.0 * p1 * chi.d1 + p * chi.d2};
  }
  return {amplitude_ * u.value, amplitude_ * u.d1, amplitude_ * u.d2};
}

RadialTestFunction RadialTestFunction::scaled(double s) const {
  RadialTestFunction u = *this;
  u.amplitude_ *= s;
  return u;
}

RadialTestFunction RadialTestFunction::with_mode(int l) const {
  if (l < 0) throw InvalidArgument("angular mode must be >= 0");
  RadialTestFunction u = *this;
  u.l_ = l;
  return u;
}

std::string RadialTestFunction::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (kind_ == ProfileKind::bump)
    os << "bump[" << a_ << ", " << b_ << "]";
  else
    os << "powerlaw(alpha=" << alpha_ << ")[" << knots_[0] << ", " << a_ << ", " << b_ << ", " << knots_[3] << "]";
  if (l_ != 0) os << " l=" << l_;
  if (amplitude_ != 1.0) os << " x" << amplitude_;
  return os.str();
}

double radial_laplacian(const SpaceForm& sf, const RadialTestFunction& u, double t) {
  if (u.mode() != 0) throw InvalidArgument("radial_laplacian: test function has angular mode >= 1");
  if (!(t > 0)) throw InvalidArgument("radial_laplacian: radius must be positive");
  return radial_laplacian(sf, u.jet(t), t);
}

double separated_laplacian(const SpaceForm& sf, const RadialTestFunction& u, double t) {
  require_radius(t, "separated_laplacian");
  const Jet j = u.jet(t);
  double out = radial_laplacian(sf, j, t);
  if (u.mode() != 0) {
    const double s = s_kappa(sf, t);
    out -= angular_eigenvalue(u.mode(), sf.n) * j.value / (s * s);
  }
  return out;
}

}  // namespace rellich::geometry
