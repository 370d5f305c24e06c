#include <cmath>
#include <utility>

#include "rellich/pairs.hpp"
#include "util/parallel.hpp"

namespace rellich::pairs {

namespace {

constexpr int kMaxBrackets = 64;

std::vector<Sample> sample_grid(const ScanFunction& f, const std::vector<double>& ts, bool parallel) {
  std::vector<Sample> out(ts.size());
  util::parallel_for(ts.size(), [&](std::size_t i) { out[i] = f(ts[i]); }, parallel);
  return out;
}

// Richardson table for samples taken at step sizes h_0 / 2^j.
std::optional<double> richardson(const std::vector<double>& values) {
  if (values.size() < 3) return std::nullopt;
  std::vector<double> prev = values;
  double best = prev.back();
  double previous_best = prev[prev.size() - 2];
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double f = std::ldexp(1.0, static_cast<int>(k));
    std::vector<double> next(prev.size() - 1);
    for (std::size_t j = 0; j + 1 < prev.size(); ++j) next[j] = (f * prev[j + 1] - prev[j]) / (f - 1.0);
    previous_best = best;
    best = next.back();
    prev = std::move(next);
    if (prev.size() == 1) break;
  }
  if (!std::isfinite(best)) return std::nullopt;
  if (std::abs(best - previous_best) > 1e-6 * std::max(1.0, std::abs(best))) return std::nullopt;
  return best;
}

std::optional<double> extrapolate(const std::function<double(double)>& f, int levels,
                                  const std::function<double(int)>& point) {
  if (levels < 3) return std::nullopt;
  std::vector<double> values;
  values.reserve(levels);
  try {
    for (int j = 0; j < levels; ++j) {
      const double v = f(point(j));
      if (!std::isfinite(v)) return std::nullopt;
      values.push_back(v);
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return richardson(values);
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::nonnegative:
      return "nonnegative";
    case Verdict::violated:
      return "violated";
    case Verdict::inconclusive_near_boundary:
      return "inconclusive-near-boundary";
  }
  return "unknown";
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo)) throw InvalidArgument("log_grid: require 0 < lo < hi");
  if (count < 1) throw InvalidArgument("log_grid: count must be positive");
  std::vector<double> out(count);
  const double span = std::log(hi / lo);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(span * (i + 0.5) / count);
  return out;
}

std::pair<double, double> scan_interval(const SpaceForm& sf, const ScanOptions& opt) {
  const double top = std::min(sf.R, 1e3);
  const double lo = opt.lo > 0 ? opt.lo : 1e-6 * top;
  const double hi = opt.hi > 0 ? opt.hi : top;
  if (!(hi > lo)) throw InvalidArgument("scan interval is empty");
  if (hi > sf.R) throw InvalidArgument("scan interval exceeds the domain radius");
  return {lo, hi};
}

std::optional<double> limit_at(const std::function<double(double)>& f, double R, int levels) {
  if (!std::isfinite(R)) return std::nullopt;
  return extrapolate(f, levels, [R](int j) { return R * (1.0 - std::ldexp(1.0, -(j + 3))); });
}

std::optional<double> limit_at_zero(const std::function<double(double)>& f, double t0, int levels) {
  return extrapolate(f, levels, [t0](int j) { return std::ldexp(t0, -j); });
}

PositivityReport scan_positivity(const ScanFunction& f, const SpaceForm& sf, const ScanOptions& opt,
                                 std::string target) {
  const auto [lo, hi] = scan_interval(sf, opt);
  const std::vector<double> ts = log_grid(lo, hi, opt.grid);
  const std::vector<Sample> s = sample_grid(f, ts, opt.parallel);

  PositivityReport rep;
  rep.target = std::move(target);
  rep.grid = opt.grid;
  rep.lo = lo;
  rep.hi = hi;
  rep.tol = opt.tol;
  rep.min_value = s[0].relative();
  rep.argmin = ts[0];
  bool violated = false;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = s[i].relative();
    if (r < rep.min_value) {
      rep.min_value = r;
      rep.argmin = ts[i];
    }
    if (r < -opt.tol) violated = true;
  }

  // Brackets around sign changes whose negative side is significant.
  for (std::size_t i = 0; i + 1 < ts.size() && rep.sign_changes.size() < kMaxBrackets; ++i) {
    const Sample& a = s[i];
    const Sample& b = s[i + 1];
    if (!(a.value * b.value < 0)) continue;
    if (std::min(a.relative(), b.relative()) >= -opt.tol) continue;
    double t1 = ts[i], t2 = ts[i + 1];
    double f1 = a.value;
    for (int k = 0; k < opt.refine; ++k) {
      const double mid = std::sqrt(t1 * t2);
      if (!(mid > t1 && mid < t2)) break;
      const double fm = f(mid).value;
      if (fm == 0.0) break;
      if ((fm < 0) == (f1 < 0)) {
        t1 = mid;
        f1 = fm;
      } else {
        t2 = mid;
      }
    }
    rep.sign_changes.push_back({t1, t2});
  }

  auto value = [&f](double t) { return f(t).value; };
  rep.limit_R = limit_at(value, sf.R, opt.richardson_levels);
  rep.limit_0 = limit_at_zero(value, lo, opt.richardson_levels);

  // A limit counts as negative relative to the term magnitude at the last
  // extrapolation point.
  auto negative = [&](const std::optional<double>& limit, double t_last) {
    if (!limit) return false;
    double scale = std::max(1.0, std::abs(*limit));
    try {
      scale = std::max(scale, f(t_last).magnitude);
    } catch (const Error&) {
    }
    return *limit < -opt.tol * scale;
  };
  const int last = opt.richardson_levels - 1;
  if (violated) {
    rep.verdict = Verdict::violated;
  } else if (negative(rep.limit_R, sf.R * (1.0 - std::ldexp(1.0, -(last + 3)))) ||
             negative(rep.limit_0, std::ldexp(lo, -last))) {
    rep.verdict = Verdict::inconclusive_near_boundary;
    rep.note = "grid samples are nonnegative but an extrapolated boundary limit is negative";
  } else {
    rep.verdict = Verdict::nonnegative;
  }
  return rep;
}

PositivityReport scan_positivity(const Expression& e, const Bindings& params, const SpaceForm& sf,
                                 const ScanOptions& opt, std::string target) {
  const Bindings b = params.merged(sf.bindings());
  auto f = [&e, &b](double t) -> Sample {
    const double v = expr::evaluate(e, b.at(t));
    return {v, std::abs(v)};
  };
  return scan_positivity(f, sf, opt, std::move(target));
}

ResidualReport residual_report(const ScanFunction& f, const SpaceForm& sf, const ScanOptions& opt,
                               std::string target) {
  const auto [lo, hi] = scan_interval(sf, opt);
  const std::vector<double> ts = log_grid(lo, hi, opt.grid);
  const std::vector<Sample> s = sample_grid(f, ts, opt.parallel);
  ResidualReport rep;
  rep.target = std::move(target);
  rep.grid = opt.grid;
  rep.lo = lo;
  rep.hi = hi;
  rep.tol = opt.tol;
  rep.min_value = s[0].relative();
  rep.argmin = ts[0];
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double r = s[i].relative();
    if (r < rep.min_value) {
      rep.min_value = r;
      rep.argmin = ts[i];
    }
    rep.max_abs = std::max(rep.max_abs, std::abs(r));
    rep.max_abs_raw = std::max(rep.max_abs_raw, std::abs(s[i].value));
  }
  rep.equality = rep.max_abs <= opt.tol;
  return rep;
}

}  // namespace rellich::pairs
