#include <algorithm>
#include <cmath>
#include <queue>

#include "rellich/verify.hpp"

namespace rellich::verify {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7]
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi;
  bool log_scale;
  double value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

void gk15(const Density& f, Segment& seg) {
  const double c = 0.5 * (seg.lo + seg.hi), h = 0.5 * (seg.hi - seg.lo);
  auto g = [&](double x) {
    if (!seg.log_scale) return f(x);
    const double t = std::exp(x);
    return f(t) * t;
  };
  const double fc = g(c);
  double kron = kWgk[7] * fc, gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double s = g(c - x) + g(c + x);
    kron += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  seg.value = kron * h;
  seg.error = std::abs((kron - gauss) * h);
}

}  // namespace

QuadratureResult integrate_plain(const Density& f, double a, double b, const QuadratureOptions& opt,
                                 const std::vector<double>& breaks) {
  if (!(a >= 0) || !(b > a) || !std::isfinite(b)) throw InvalidArgument("integrate: require 0 <= a < b < inf");
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());

  std::priority_queue<Segment> queue;
  double total = 0.0, error = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    Segment s{lo, hi, false, 0.0, 0.0};
    if (lo > 0 && hi / lo > 4.0) s = {std::log(lo), std::log(hi), true, 0.0, 0.0};
    gk15(f, s);
    total += s.value;
    error += s.error;
    queue.push(s);
  }

  int count = static_cast<int>(queue.size());
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (count >= opt.max_subintervals)
      throw NumericalFailure("integrate: no convergence within " + std::to_string(opt.max_subintervals) +
                             " subintervals (estimate " + std::to_string(total) + " +- " + std::to_string(error) + ")");
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // cannot split further; accept what is left
      queue.push(worst);
      break;
    }
    Segment left{worst.lo, mid, worst.log_scale, 0.0, 0.0}, right{mid, worst.hi, worst.log_scale, 0.0, 0.0};
    gk15(f, left);
    gk15(f, right);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }

  // Re-sum to avoid drift from the incremental updates.
  QuadratureResult r;
  r.subintervals = static_cast<int>(queue.size());
  while (!queue.empty()) {
    r.value += queue.top().value;
    r.error += queue.top().error;
    queue.pop();
  }
  if (!std::isfinite(r.value)) throw NumericalFailure("integrate: non-finite result");
  return r;
}

QuadratureResult integrate(const SpaceForm& sf, const Density& density, double a, double b,
                           const QuadratureOptions& opt, const std::vector<double>& breaks) {
  if (b > sf.R) throw InvalidArgument("integrate: interval exceeds the domain radius");
  return integrate_plain([&](double t) { return t > 0 ? density(t) * geometry::volume_weight(sf, t) : 0.0; }, a, b,
                         opt, breaks);
}

namespace {

QuadratureResult integrate_profile(const SpaceForm& sf, const RadialTestFunction& u, const Density& density,
                                   const QuadratureOptions& opt) {
  const auto& k = u.knots();
  return integrate(sf, density, k[0], k[3], opt, {k[1], k[2]});
}

}  // namespace

QuadratureResult lhs_delta_sq(const SpaceForm& sf, const Expression& v, const Bindings& params,
                              const RadialTestFunction& u, const QuadratureOptions& opt) {
  if (u.amplitude() == 0.0) return {};
  const Bindings b = params.merged(sf.bindings());
  return integrate_profile(sf, u, [&](double t) {
    const double d = geometry::separated_laplacian(sf, u, t);
    if (d == 0.0) return 0.0;
    return expr::evaluate(v, b.at(t)) * d * d;
  }, opt);
}

std::string_view gradient_name(Gradient g) {
  switch (g) {
    case Gradient::gradrad:
      return "gradrad";
    case Gradient::grad:
      return "grad";
    case Gradient::usq:
      return "usq";
  }
  return "unknown";
}

QuadratureResult rhs_weighted(const SpaceForm& sf, const Expression& f, const Bindings& params,
                              const RadialTestFunction& u, Gradient which, const QuadratureOptions& opt) {
  if (u.amplitude() == 0.0) return {};
  const Bindings b = params.merged(sf.bindings());
  const double mu = geometry::angular_eigenvalue(u.mode(), sf.n);
  return integrate_profile(sf, u, [&](double t) {
    const geometry::Jet j = u.jet(t);
    double q = 0.0;
    switch (which) {
      case Gradient::gradrad:
        q = j.d1 * j.d1;
        break;
      case Gradient::grad: {
        q = j.d1 * j.d1;
        if (mu != 0.0) {
          const double s = geometry::s_kappa(sf, t);
          q += mu * j.value * j.value / (s * s);
        }
        break;
      }
      case Gradient::usq:
        q = j.value * j.value;
        break;
    }
    if (q == 0.0) return 0.0;
    return expr::evaluate(f, b.at(t)) * q;
  }, opt);
}

}  // namespace rellich::verify
