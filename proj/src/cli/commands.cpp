#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>

#include "rellich/cli.hpp"
#include "rellich/sharpness.hpp"
#include "rellich/verify.hpp"

namespace rellich::cli {

using json = nlohmann::ordered_json;
using catalog::NamedSpec;
using catalog::Shape;
using expr::Bindings;
using expr::Expression;
using expr::Param;
using geometry::SpaceForm;
using pairs::PairKind;
using pairs::PairSpec;

namespace {

struct Source {
  std::string id;
  SpaceForm sf;
  std::vector<NamedSpec> specs;
  std::optional<catalog::Chain> chain;
  std::string provenance;
};

Expression parse_field(const std::string& name, const std::string& text) {
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

Source resolve(const RunConfig& cfg) {
  Source s;
  if (cfg.catalog) {
    catalog::CatalogParams p;
    p.n = cfg.n;
    p.kappa = cfg.kappa;
    p.lambda = cfg.lambda;
    p.k = cfg.k;
    p.R = cfg.R;
    catalog::CatalogEntry e;
    try {
      e = catalog::make_entry(*cfg.catalog, p);
    } catch (const InvalidArgument& ex) {
      throw UsageError(ex.what());
    }
    s.id = e.id;
    s.sf = e.space;
    s.specs = e.specs;
    s.chain = e.chain;
    s.provenance = e.provenance;
    return s;
  }
  try {
    s.sf = SpaceForm(cfg.n.value_or(5), cfg.kappa.value_or(0.0), cfg.R.value_or(geometry::kInfinity));
  } catch (const InvalidArgument& ex) {
    throw UsageError(ex.what());
  }
  Bindings b;
  if (cfg.lambda) b.set(Param::lambda, *cfg.lambda);
  if (cfg.k) b.set(Param::k, *cfg.k);
  if (cfg.c) b.set(Param::c, *cfg.c);
  NamedSpec ns;
  ns.role = "inline";
  s.id = "inline";
  if (cfg.H) {
    ns.spec = PairSpec::dual(parse_field("H", *cfg.H), parse_field("v", cfg.v.value_or("1")),
                             parse_field("V", *cfg.V), b);
    ns.shapes = {Shape::delta_vs_gradrad, Shape::delta_vs_grad};
  } else if (cfg.G) {
    ns.spec = PairSpec::primal(parse_field("G", *cfg.G), parse_field("w", cfg.w.value_or("1")),
                               parse_field("W", *cfg.W), b);
    ns.shapes = {Shape::gradrad_vs_usq};
  } else {
    ns.spec = PairSpec::bessel_potential(parse_field("z", *cfg.z), parse_field("Z", *cfg.Z), cfg.c.value_or(0.25), b);
  }
  if (cfg.signed_potential) ns.spec = ns.spec.with_signed_potential(true);
  s.specs.push_back(std::move(ns));
  return s;
}

const NamedSpec& pick(const Source& s, const RunConfig& cfg, const std::function<bool(const NamedSpec&)>& fits,
                      const std::string& what) {
  if (!cfg.role.empty()) {
    for (const auto& ns : s.specs)
      if (ns.role == cfg.role) return ns;
    std::string roles;
    for (const auto& ns : s.specs) roles += (roles.empty() ? "" : ", ") + ns.role;
    throw UsageError("entry " + s.id + " has no role '" + cfg.role + "' (roles: " + roles + ")");
  }
  for (const auto& ns : s.specs)
    if (fits(ns)) return ns;
  throw UsageError("entry " + s.id + " has no " + what);
}

std::string timestamp(const RunConfig& cfg) {
  if (!cfg.timestamp.empty()) return cfg.timestamp;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Report base(const RunConfig& cfg, const SpaceForm& sf) {
  Report r;
  r.command = cfg.command;
  r.config = cfg.to_json();
  r.n = sf.n;
  r.kappa = sf.kappa;
  if (std::isfinite(sf.R)) r.R = sf.R;
  r.seed = cfg.seed;
  r.timestamp = timestamp(cfg);
  return r;
}

pairs::ScanOptions scan_options(const RunConfig& cfg) {
  pairs::ScanOptions o;
  o.grid = cfg.grid;
  o.tol = cfg.tol;
  o.lo = cfg.lo;
  o.hi = cfg.hi;
  o.parallel = cfg.parallel;
  return o;
}

std::string kind_label(PairKind k) { return std::string(pairs::kind_name(k)); }

json describe_spec(const NamedSpec& ns) {
  json j;
  j["role"] = ns.role;
  j["kind"] = kind_label(ns.spec.kind());
  switch (ns.spec.kind()) {
    case PairKind::dual: {
      const auto& d = ns.spec.as_dual();
      j["H"] = expr::print(d.H);
      j["v"] = expr::print(d.v);
      j["V"] = expr::print(d.V);
      break;
    }
    case PairKind::primal: {
      const auto& q = ns.spec.as_primal();
      j["G"] = expr::print(q.G);
      j["w"] = expr::print(q.w);
      j["W"] = expr::print(q.W);
      break;
    }
    case PairKind::bessel_potential: {
      const auto& p = ns.spec.as_potential();
      j["z"] = expr::print(p.z);
      j["Z"] = expr::print(p.Z);
      j["c"] = p.c;
      break;
    }
    case PairKind::bessel_pair: {
      const auto& p = ns.spec.as_bessel_pair();
      j["y"] = p.y ? json(expr::print(*p.y)) : json(nullptr);
      j["X"] = expr::print(p.X);
      j["Y"] = expr::print(p.Y);
      j["C"] = p.C;
      break;
    }
  }
  json shapes = json::array();
  for (Shape s : ns.shapes) shapes.push_back(catalog::shape_name(s));
  j["shapes"] = shapes;
  j["signed"] = ns.spec.signed_potential();
  if (!ns.spec.note().empty()) j["note"] = ns.spec.note();
  return j;
}

json describe_chain(const catalog::Chain& c) {
  json j;
  j["id"] = c.id;
  j["links"] = json::array();
  for (const auto& l : c.links) j["links"].push_back({{"name", l.name}, {"coefficient", l.coefficient}});
  auto terms = [](const std::vector<catalog::ChainTerm>& ts) {
    json a = json::array();
    for (const auto& t : ts)
      a.push_back({{"label", t.label}, {"coefficient", t.coefficient}, {"density", expr::print(t.density)}});
    return a;
  };
  j["final_terms"] = terms(c.final_terms);
  if (!c.printed_terms.empty()) j["printed_terms"] = terms(c.printed_terms);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json opt_json(const std::optional<double>& x) {
  if (x && std::isfinite(*x)) return *x;
  return nullptr;
}

ScanRow positivity_row(const pairs::PositivityReport& p) {
  ScanRow row;
  row.target = p.target;
  row.verdict = std::string(pairs::verdict_name(p.verdict));
  row.min = p.min_value;
  row.argmin = p.argmin;
  row.boundary_limit_R = p.limit_R;
  json changes = json::array();
  for (const auto& c : p.sign_changes) changes.push_back({c.t1, c.t2});
  row.extra = {{"sign_changes", changes},
               {"boundary_limit_0", opt_json(p.limit_0)},
               {"grid", p.grid},
               {"lo", p.lo},
               {"hi", p.hi},
               {"tol", p.tol}};
  if (!p.note.empty()) row.extra["note"] = p.note;
  return row;
}

std::string verdict_of(pairs::Verdict v) {
  switch (v) {
    case pairs::Verdict::nonnegative:
      return "pass";
    case pairs::Verdict::violated:
      return "fail";
    case pairs::Verdict::inconclusive_near_boundary:
      return "inconclusive";
  }
  return "inconclusive";
}

void fill_verification(Report& r, const verify::VerificationReport& v, const RunConfig& cfg,
                       const verify::QuadratureOptions& quad) {
  r.case_id = v.case_id;
  for (const auto& t : v.tests) {
    TestRow row;
    row.id = std::to_string(t.index) + "/" + t.link;
    row.params = {{"index", t.index}, {"link", t.link}, {"function", t.function}, {"mode", t.mode}};
    row.lhs = t.lhs;
    row.rhs = t.rhs;
    row.margin = t.margin;
    row.budget = t.budget;
    row.extra = {{"pass", t.pass}};
    r.tests.push_back(std::move(row));
  }
  for (const auto& s : v.scans) {
    ScanRow row;
    row.target = s.target;
    row.verdict = std::string(pairs::verdict_name(s.verdict));
    row.min = s.min_value;
    row.argmin = s.argmin;
    row.boundary_limit_R = s.limit_R;
    row.extra = {{"required", s.required}};
    if (!s.note.empty()) row.extra["note"] = s.note;
    r.scans.push_back(std::move(row));
  }
  r.verdict = std::string(verify::outcome_name(v.verdict));
  r.notes = v.notes;
  r.details = {{"shape", catalog::shape_name(v.shape)},
               {"batch", {{"count", cfg.tests}, {"seed", cfg.seed}, {"modes", cfg.modes}}},
               {"quadrature", {{"rel_tol", quad.rel_tol}, {"abs_tol", quad.abs_tol},
                               {"max_subintervals", quad.max_subintervals}}},
               {"scan", {{"grid", cfg.grid}, {"tol", cfg.tol}}}};
}

std::optional<Shape> requested_shape(const RunConfig& cfg) {
  if (cfg.shape.empty()) return std::nullopt;
  const auto s = catalog::shape_from_name(cfg.shape);
  if (!s) throw UsageError("unknown shape '" + cfg.shape + "'");
  return s;
}

bool has_shape(const NamedSpec& ns, Shape s) {
  for (Shape x : ns.shapes)
    if (x == s) return true;
  return false;
}

Report check_pair(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  const NamedSpec& ns = pick(src, cfg, [](const NamedSpec&) { return true; }, "spec");
  const SpaceForm& sf = src.sf;
  Report r = base(cfg, sf);
  r.case_id = src.id + ":" + ns.role;
  std::string target;
  switch (ns.spec.kind()) {
    case PairKind::dual:
      target = "dual-residual";
      break;
    case PairKind::primal:
      target = "residual";
      break;
    case PairKind::bessel_potential:
      target = "bessel-potential-residual";
      break;
    case PairKind::bessel_pair:
      target = "bessel-pair-residual";
      break;
  }
  const PairSpec& spec = ns.spec;
  const auto rr = pairs::residual_report([&](double t) { return pairs::defining_residual(sf, spec, t); }, sf,
                                         scan_options(cfg), target);
  ScanRow row;
  row.target = rr.target;
  row.verdict = rr.equality ? "equality" : "nonzero";
  row.min = rr.min_value;
  row.argmin = rr.argmin;
  row.extra = {{"max_abs", rr.max_abs}, {"max_abs_raw", rr.max_abs_raw}, {"grid", rr.grid},
               {"lo", rr.lo},           {"hi", rr.hi},                   {"tol", rr.tol}};
  r.scans.push_back(row);
  r.verdict = rr.equality ? "pass" : "fail";
  r.details = {{"spec", describe_spec(ns)}};
  return r;
}

Report scan(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  const SpaceForm& sf = src.sf;
  std::string target = cfg.target;
  auto kind_is = [](PairKind k) { return [k](const NamedSpec& ns) { return ns.spec.kind() == k; }; };
  const NamedSpec* ns = nullptr;
  if (target == "E1" || target == "E2" || target == "V")
    ns = &pick(src, cfg, kind_is(PairKind::dual), "dual pair");
  else if (target == "W")
    ns = &pick(src, cfg, kind_is(PairKind::primal), "primal pair");
  else if (target == "Z")
    ns = &pick(src, cfg, kind_is(PairKind::bessel_potential), "Bessel potential");
  else if (target.empty() || target == "expr")
    ns = &pick(src, cfg, [](const NamedSpec&) { return true; }, "spec");
  else
    throw UsageError("unknown scan target '" + target + "' (E1, E2, V, W, Z or expr)");
  const PairSpec& spec = ns->spec;
  if (target.empty()) {
    switch (spec.kind()) {
      case PairKind::dual:
        target = "E1";
        break;
      case PairKind::primal:
        target = "W";
        break;
      case PairKind::bessel_potential:
        target = "Z";
        break;
      case PairKind::bessel_pair:
        throw UsageError("give --target expr with --expr for a Bessel pair");
    }
  }
  const auto opt = scan_options(cfg);
  const Bindings b = spec.bindings(sf);
  pairs::PositivityReport p;
  if (target == "E1")
    p = pairs::scan_positivity([&](double t) { return pairs::e1_terms(sf, spec, t); }, sf, opt, "E1");
  else if (target == "E2")
    p = pairs::scan_positivity([&](double t) { return pairs::e2_terms(sf, spec, t); }, sf, opt, "E2");
  else if (target == "V")
    p = pairs::scan_positivity(spec.as_dual().V, b, sf, opt, "V");
  else if (target == "W")
    p = pairs::scan_positivity(spec.as_primal().W, b, sf, opt, "W");
  else if (target == "Z")
    p = pairs::scan_positivity(spec.as_potential().Z, b, sf, opt, "Z");
  else
    p = pairs::scan_positivity(parse_field("expr", *cfg.expr), b, sf, opt, "expr");

  Report r = base(cfg, sf);
  r.case_id = src.id + ":" + ns->role;
  r.scans.push_back(positivity_row(p));
  r.verdict = verdict_of(p.verdict);
  r.details = {{"spec", describe_spec(*ns)}};
  if (!p.sign_changes.empty()) {
    const auto& last = p.sign_changes.back();
    r.notes.push_back("sign change of " + target + " in [" + std::to_string(last.t1) + ", " +
                      std::to_string(last.t2) + "]");
  }
  return r;
}

verify::Batch batch_of(const RunConfig& cfg) {
  verify::Batch b;
  b.count = cfg.tests;
  b.seed = cfg.seed;
  b.modes = cfg.modes;
  return b;
}

Report verify_cmd(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  const auto want = requested_shape(cfg);
  if (want == Shape::chain) throw UsageError("use the chain command for chains");
  const NamedSpec& ns = pick(src, cfg, [&](const NamedSpec& x) {
    return want ? has_shape(x, *want) : !x.shapes.empty();
  }, want ? "spec for shape " + cfg.shape : "spec with an inequality shape");
  verify::InequalityCase c;
  c.id = src.id + ":" + ns.role;
  if (want)
    c.shape = *want;
  else if (!ns.shapes.empty())
    c.shape = ns.shapes.front();
  else
    throw UsageError("role " + ns.role + " has no inequality shape; pass --shape");
  c.spec = ns.spec;
  c.sf = src.sf;
  c.batch = batch_of(cfg);
  c.scan = scan_options(cfg);
  c.quad.rel_tol = cfg.quad_tol;
  c.parallel = cfg.parallel;
  verify::VerificationReport v;
  try {
    v = verify::verify_case(c);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  Report r = base(cfg, src.sf);
  fill_verification(r, v, cfg, c.quad);
  r.details["spec"] = describe_spec(ns);
  return r;
}

Report chain_cmd(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  if (!src.chain) throw UsageError("entry " + src.id + " has no chain");
  verify::QuadratureOptions quad;
  quad.rel_tol = cfg.quad_tol;
  const auto v = verify::verify_chain(*src.chain, src.sf, batch_of(cfg), scan_options(cfg), quad, cfg.parallel);
  Report r = base(cfg, src.sf);
  fill_verification(r, v, cfg, quad);
  r.details["chain"] = describe_chain(*src.chain);
  return r;
}

Report solve_bessel(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  const NamedSpec& ns = pick(src, cfg, [](const NamedSpec& x) {
    return x.spec.kind() == PairKind::bessel_potential || x.spec.kind() == PairKind::bessel_pair;
  }, "Bessel potential or pair");
  if (!std::isfinite(src.sf.R)) throw UsageError("solve-bessel needs a finite --R");
  pairs::DisconjugacyOptions o;
  o.depth = cfg.depth;
  pairs::DisconjugacyReport d;
  try {
    d = pairs::disconjugacy_check(ns.spec, src.sf.n, src.sf.R, o);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  Report r = base(cfg, src.sf);
  r.case_id = src.id + ":" + ns.role;
  r.verdict = d.inconclusive ? "inconclusive" : d.positive_solution ? "pass" : "fail";
  r.details = {{"spec", describe_spec(ns)},
               {"positive_solution", d.positive_solution},
               {"inconclusive", d.inconclusive},
               {"first_zero", opt_json(d.first_zero)},
               {"first_zero_log", opt_json(d.first_zero_log)},
               {"log_t0", d.log_t0},
               {"exponent", d.exponent},
               {"steps", d.steps},
               {"depth", o.depth},
               {"tol", o.tol}};
  if (!d.note.empty()) r.notes.push_back(d.note);
  return r;
}

// C when f(t) t^2 is the constant C at a few sample radii.
std::optional<double> inverse_square_constant(const Expression& f, const Bindings& b, const SpaceForm& sf) {
  if (!sf.euclidean()) return std::nullopt;
  std::optional<double> c;
  for (double t : {1e-3, 0.1, 0.7, 0.9 * std::min(sf.R, 10.0)}) {
    double v = 0.0;
    try {
      v = expr::evaluate(f, b.at(t)) * t * t;
    } catch (const Error&) {
      return std::nullopt;
    }
    if (!c)
      c = v;
    else if (std::abs(v - *c) > 1e-12 * std::max(1.0, std::abs(*c)))
      return std::nullopt;
  }
  return c;
}

Report estimate(const RunConfig& cfg) {
  const Source src = resolve(cfg);
  const auto want = requested_shape(cfg);
  sharpness::Problem p;
  p.sf = src.sf;
  p.mode = cfg.mode;
  std::string role;
  json spec_json;
  if (want == Shape::chain) {
    if (!src.chain) throw UsageError("entry " + src.id + " has no chain");
    p.shape = Shape::chain;
    p.chain = src.chain;
    role = "chain";
    spec_json = describe_chain(*src.chain);
    if (src.chain->final_terms.size() == 1) p.claimed = src.chain->final_terms.front().coefficient;
  } else {
    const NamedSpec& ns = pick(src, cfg, [&](const NamedSpec& x) {
      return want ? has_shape(x, *want) : !x.shapes.empty();
    }, "spec with an inequality shape");
    if (!want && ns.shapes.empty()) throw UsageError("role " + ns.role + " has no inequality shape; pass --shape");
    p.shape = want ? *want : ns.shapes.front();
    p.spec = ns.spec;
    role = ns.role;
    spec_json = describe_spec(ns);
    const Bindings b = ns.spec.bindings(src.sf);
    if (ns.spec.kind() == PairKind::dual)
      p.claimed = inverse_square_constant(ns.spec.as_dual().V, b, src.sf);
    else if (ns.spec.kind() == PairKind::primal)
      p.claimed = inverse_square_constant(ns.spec.as_primal().W, b, src.sf);
  }
  if (cfg.claimed) p.claimed = cfg.claimed;

  sharpness::SharpnessOptions o;
  o.budget = cfg.budget;
  o.quad.rel_tol = cfg.quad_tol;
  sharpness::SharpnessEstimate e;
  try {
    e = sharpness::estimate_constant(p, o);
  } catch (const InvalidArgument& ex) {
    throw UsageError(ex.what());
  }
  Report r = base(cfg, src.sf);
  r.case_id = src.id + ":" + role;
  const double target = p.claimed.value_or(1.0);
  TestRow row;
  row.id = "best";
  row.params = {{"alpha", e.alpha}, {"a", e.a}, {"b", e.b}, {"w_in", e.w_in}, {"w_out", e.w_out}, {"mode", e.mode}};
  row.lhs = e.estimate;
  row.rhs = target;
  row.margin = e.estimate - target;
  row.budget = 10.0 * e.error;
  r.tests.push_back(row);
  r.verdict = row.margin >= -row.budget ? "pass" : "fail";
  r.details = {{"shape", catalog::shape_name(p.shape)},
               {"spec", spec_json},
               {"estimate", e.estimate},
               {"claimed", opt_json(p.claimed)},
               {"gap", opt_json(e.gap)},
               {"error", e.error},
               {"evaluations", e.evaluations},
               {"label", e.label}};
  r.notes.push_back(e.label);
  return r;
}

Report catalog_cmd(const RunConfig& cfg) {
  if (cfg.action == "list") {
    Report r = base(cfg, SpaceForm(2, 0.0));
    r.n = 0;
    json entries = json::array();
    for (const auto& info : catalog::catalog_list())
      entries.push_back({{"id", info.id}, {"summary", info.summary}, {"parameters", info.parameters}});
    r.details = {{"entries", entries}};
    r.verdict = "pass";
    return r;
  }
  const Source src = resolve(cfg);
  Report r = base(cfg, src.sf);
  r.case_id = src.id;
  json specs = json::array();
  for (const auto& ns : src.specs) specs.push_back(describe_spec(ns));
  r.details = {{"id", src.id}, {"specs", specs}, {"provenance", src.provenance}};
  if (src.chain) r.details["chain"] = describe_chain(*src.chain);
  r.verdict = "pass";
  return r;
}

}  // namespace

Report execute(const RunConfig& cfg) {
  if (cfg.command == "check-pair") return check_pair(cfg);
  if (cfg.command == "scan") return scan(cfg);
  if (cfg.command == "verify") return verify_cmd(cfg);
  if (cfg.command == "chain") return chain_cmd(cfg);
  if (cfg.command == "solve-bessel") return solve_bessel(cfg);
  if (cfg.command == "estimate") return estimate(cfg);
  if (cfg.command == "catalog") return catalog_cmd(cfg);
  throw UsageError("unknown command '" + cfg.command + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_args(args);
    const Report r = execute(cfg);
    const std::string text = format_report(r, cfg.format);
    if (cfg.output.empty()) {
      out << text;
    } else {
      write_atomic(cfg.output, text);
      out << r.command << ": " << r.verdict << " (report written to " << cfg.output << ")\n";
    }
    out.flush();
    return exit_code(r);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitPass;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnboundParameterError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitInconclusive;
  }
}

}  // namespace rellich::cli
