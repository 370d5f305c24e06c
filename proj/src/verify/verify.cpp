#include <cmath>
#include <limits>

#include "rellich/verify.hpp"
#include "util/parallel.hpp"

namespace rellich::verify {

using pairs::Sample;
using pairs::Verdict;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kCompositionGrid = 1000;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1p-53; }

ScanSummary scan(const pairs::ScanFunction& f, const SpaceForm& sf, const pairs::ScanOptions& opt, std::string target,
                 bool required = true) {
  const pairs::PositivityReport r = pairs::scan_positivity(f, sf, opt, std::move(target));
  return {r.target, r.verdict, r.min_value, r.argmin, r.limit_R, r.note, required};
}

Sample expression_sample(const Expression& e, const Bindings& b, double t) {
  const double v = expr::evaluate(e, b.at(t));
  return {v, std::abs(v)};
}

// Side conditions of a dual pair for the delta shapes.
std::vector<ScanSummary> dual_scans(const PairSpec& p, const SpaceForm& sf, const pairs::ScanOptions& opt, bool e2,
                                  const std::string& prefix, std::vector<std::string>& notes) {
  std::vector<ScanSummary> out;
  out.push_back(scan([&](double t) { return pairs::dual_riccati_residual_terms(sf, p, t); }, sf, opt,
                     prefix + "dual-residual"));
  if (e2)
    out.push_back(scan([&](double t) { return pairs::e2_terms(sf, p, t); }, sf, opt, prefix + "E2"));
  else
    out.push_back(scan([&](double t) { return pairs::e1_terms(sf, p, t); }, sf, opt, prefix + "E1"));
  const Bindings b = p.bindings(sf);
  const Expression& V = p.as_dual().V;
  out.push_back(scan([&](double t) { return expression_sample(V, b, t); }, sf, opt, prefix + "V",
                     !p.signed_potential()));
  if (p.signed_potential()) notes.push_back(prefix + "V is flagged signed; its scan is reported but not required");
  return out;
}

std::vector<ScanSummary> primal_scans(const PairSpec& p, const SpaceForm& sf, const pairs::ScanOptions& opt,
                                    const std::string& prefix, std::vector<std::string>& notes) {
  std::vector<ScanSummary> out;
  out.push_back(scan([&](double t) { return pairs::riccati_residual_terms(sf, p, t); }, sf, opt, prefix + "residual"));
  const Bindings b = p.bindings(sf);
  const Expression& W = p.as_primal().W;
  out.push_back(scan([&](double t) { return expression_sample(W, b, t); }, sf, opt, prefix + "W",
                     !p.signed_potential()));
  if (p.signed_potential()) notes.push_back(prefix + "W is flagged signed; its scan is reported but not required");
  return out;
}

TestRecord make_record(int index, std::string link, const RadialTestFunction& u, const QuadratureResult& lhs,
                       const QuadratureResult& rhs) {
  TestRecord r;
  r.index = index;
  r.link = std::move(link);
  r.function = u.describe();
  r.mode = u.mode();
  r.lhs = lhs.value;
  r.rhs = rhs.value;
  r.margin = lhs.value - rhs.value;
  r.budget = comparison_budget(lhs, rhs);
  r.pass = r.margin >= -r.budget;
  return r;
}

QuadratureResult scaled(QuadratureResult q, double c) {
  q.value *= c;
  q.error *= std::abs(c);
  return q;
}

void finish(VerificationReport& rep, const std::vector<ScanSummary>& scans) {
  bool side_ok = true;
  for (const ScanSummary& s : scans) {
    rep.scans.push_back(s);
    if (s.required && s.verdict != Verdict::nonnegative) side_ok = false;
  }
  bool margins_ok = true;
  for (const TestRecord& t : rep.tests) margins_ok = margins_ok && t.pass;
  rep.verdict = !margins_ok ? Outcome::fail : side_ok ? Outcome::pass : Outcome::inconclusive;
  if (rep.verdict == Outcome::inconclusive) rep.notes.push_back("a required side condition is not verified nonnegative");
  rep.notes.push_back(
      "certified on the sampled batch of separated test functions on geodesic balls around the base point; this is a "
      "necessary condition, not a proof of the inequality");
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass:
      return "pass";
    case Outcome::fail:
      return "fail";
    case Outcome::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double comparison_budget(const QuadratureResult& lhs, const QuadratureResult& rhs) {
  return lhs.error + rhs.error + 64.0 * kEps * (std::abs(lhs.value) + std::abs(rhs.value));
}

bool VerificationReport::consistent() const {
  for (const TestRecord& t : tests)
    if (t.pass != (t.margin >= -t.budget)) return false;
  if (verdict != Outcome::pass) return true;
  for (const TestRecord& t : tests)
    if (!t.pass) return false;
  for (const ScanSummary& s : scans)
    if (s.required && s.verdict != Verdict::nonnegative) return false;
  return true;
}

std::vector<RadialTestFunction> make_batch(const SpaceForm& sf, const Batch& batch) {
  if (batch.count < 1) throw InvalidArgument("batch count must be positive");
  if (batch.modes.empty()) throw InvalidArgument("batch needs at least one angular mode");
  const double Rb = std::min(sf.R, 10.0);
  const double lo = std::log(0.02 * Rb), hi = std::log(0.98 * Rb);
  std::uint64_t state = batch.seed;
  std::vector<RadialTestFunction> out;
  out.reserve(batch.count);
  for (int i = 0; i < batch.count; ++i) {
    double a = 0, b = 0;
    do {
      a = std::exp(lo + (hi - lo) * unit(state));
      b = std::exp(lo + (hi - lo) * unit(state));
      if (a > b) std::swap(a, b);
    } while (b < 1.2 * a);
    out.push_back(geometry::make_bump(a, b, sf, batch.modes[i % batch.modes.size()]));
  }
  return out;
}

VerificationReport verify_case(const InequalityCase& c) {
  if (c.shape == Shape::chain) {
    if (!c.chain) throw InvalidArgument("verify_case: shape chain requires a chain descriptor");
    VerificationReport r = verify_chain(*c.chain, c.sf, c.batch, c.scan, c.quad, c.parallel);
    if (!c.id.empty()) r.case_id = c.id;
    return r;
  }
  if (!c.spec) throw InvalidArgument("verify_case: a pair spec is required");
  const PairSpec& p = *c.spec;
  const bool delta = c.shape == Shape::delta_vs_gradrad || c.shape == Shape::delta_vs_grad;
  if (delta && p.kind() != pairs::PairKind::dual)
    throw InvalidArgument("verify_case: shape " + std::string(catalog::shape_name(c.shape)) + " requires a dual pair");
  if (!delta && p.kind() != pairs::PairKind::primal)
    throw InvalidArgument("verify_case: shape gradrad-vs-usq requires a primal pair");
  if (c.shape == Shape::delta_vs_grad) {
    bool angular = false;
    for (int l : c.batch.modes) angular = angular || l >= 1;
    if (!angular) throw InvalidArgument("verify_case: delta-vs-grad needs a batch with angular modes l >= 1");
  }

  VerificationReport rep;
  rep.case_id = c.id;
  rep.shape = c.shape;
  rep.sf = c.sf;
  rep.seed = c.batch.seed;

  std::vector<ScanSummary> scans = delta ? dual_scans(p, c.sf, c.scan, c.shape == Shape::delta_vs_grad, "", rep.notes)
                                       : primal_scans(p, c.sf, c.scan, "", rep.notes);

  const std::vector<RadialTestFunction> batch = make_batch(c.sf, c.batch);
  const Bindings b = p.bindings(c.sf);
  rep.tests.resize(batch.size());
  util::parallel_for(batch.size(), [&](std::size_t i) {
    const RadialTestFunction& u = batch[i];
    QuadratureResult lhs, rhs;
    if (delta) {
      const auto& d = p.as_dual();
      lhs = lhs_delta_sq(c.sf, d.v, b, u, c.quad);
      const Gradient g = c.shape == Shape::delta_vs_grad ? Gradient::grad : Gradient::gradrad;
      rhs = rhs_weighted(c.sf, d.v * d.V, b, u, g, c.quad);
    } else {
      const auto& q = p.as_primal();
      lhs = rhs_weighted(c.sf, q.w, b, u, Gradient::gradrad, c.quad);
      rhs = rhs_weighted(c.sf, q.w * q.W, b, u, Gradient::usq, c.quad);
    }
    rep.tests[i] = make_record(static_cast<int>(i), "inequality", u, lhs, rhs);
  }, c.parallel);
  finish(rep, scans);
  return rep;
}

VerificationReport verify_chain(const Chain& chain, const SpaceForm& sf, const Batch& batch,
                                const pairs::ScanOptions& scan_opt, const QuadratureOptions& quad, bool parallel) {
  if (chain.links.empty()) throw InvalidArgument("verify_chain: a chain needs at least one primal link");
  chain.dual.as_dual();
  for (const auto& l : chain.links) l.primal.as_primal();

  // v V = sum c_i w_i and the final terms equal sum c_i w_i W_i
  const Bindings b = chain.dual.bindings(sf);
  {
    const auto [lo, hi] = pairs::scan_interval(sf, scan_opt);
    const Expression vV = chain.dual.as_dual().v * chain.dual.as_dual().V;
    const Expression final_density = catalog::terms_density(chain.final_terms);
    for (double t : pairs::log_grid(lo, hi, kCompositionGrid)) {
      const double lhs = expr::evaluate(vV, b.at(t));
      double sum = 0.0, mag = std::abs(lhs), composed = 0.0, cmag = 0.0;
      for (const auto& l : chain.links) {
        const Bindings lb = l.primal.bindings(sf).at(t);
        const double w = expr::evaluate(l.primal.as_primal().w, lb);
        const double term = l.coefficient * w;
        sum += term;
        mag += std::abs(term);
        const double wW = term * expr::evaluate(l.primal.as_primal().W, lb);
        composed += wW;
        cmag += std::abs(wW);
      }
      if (std::abs(lhs - sum) > 1e-9 * std::max(1.0, mag)) {
        std::string names;
        for (const auto& l : chain.links) names += (names.empty() ? "" : " + ") + std::to_string(l.coefficient) + " w[" + l.name + "]";
        throw InvalidArgument("verify_chain: weights do not compose: v V = " + std::to_string(lhs) + " but " + names +
                              " = " + std::to_string(sum) + " at t = " + std::to_string(t));
      }
      const double fd = expr::evaluate(final_density, b.at(t));
      if (std::abs(fd - composed) > 1e-9 * std::max(1.0, cmag + std::abs(fd)))
        throw InvalidArgument("verify_chain: final terms differ from the composed links at t = " + std::to_string(t));
    }
  }

  VerificationReport rep;
  rep.case_id = chain.id;
  rep.shape = Shape::chain;
  rep.sf = sf;
  rep.seed = batch.seed;

  std::vector<ScanSummary> scans = dual_scans(chain.dual, sf, scan_opt, false, "dual:", rep.notes);
  for (const auto& l : chain.links) {
    auto s = primal_scans(l.primal, sf, scan_opt, l.name + ":", rep.notes);
    scans.insert(scans.end(), s.begin(), s.end());
  }

  const std::vector<RadialTestFunction> us = make_batch(sf, batch);
  const std::size_t rows = chain.links.size() + 2;
  std::vector<std::vector<TestRecord>> records(us.size());
  const Expression final_density = catalog::terms_density(chain.final_terms);
  util::parallel_for(us.size(), [&](std::size_t i) {
    const RadialTestFunction& u = us[i];
    const auto& d = chain.dual.as_dual();
    std::vector<TestRecord> out;
    out.reserve(rows);
    const QuadratureResult lhs = lhs_delta_sq(sf, d.v, b, u, quad);
    out.push_back(make_record(static_cast<int>(i), "dual", u, lhs,
                              rhs_weighted(sf, d.v * d.V, b, u, Gradient::gradrad, quad)));
    for (const auto& l : chain.links) {
      const auto& q = l.primal.as_primal();
      const Bindings lb = l.primal.bindings(sf);
      out.push_back(make_record(static_cast<int>(i), l.name, u,
                                scaled(rhs_weighted(sf, q.w, lb, u, Gradient::gradrad, quad), l.coefficient),
                                scaled(rhs_weighted(sf, q.w * q.W, lb, u, Gradient::usq, quad), l.coefficient)));
    }
    out.push_back(make_record(static_cast<int>(i), "end-to-end", u, lhs,
                              rhs_weighted(sf, final_density, b, u, Gradient::usq, quad)));
    records[i] = std::move(out);
  }, parallel);
  for (auto& r : records) rep.tests.insert(rep.tests.end(), r.begin(), r.end());
  finish(rep, scans);
  if (!chain.note.empty()) rep.notes.push_back(chain.note);
  return rep;
}

}  // namespace rellich::verify
