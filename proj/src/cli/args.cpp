#include <cmath>

#include "CLI11.hpp"
#include "rellich/cli.hpp"

namespace rellich::cli {

namespace {

void add_source(CLI::App* app, RunConfig& c) {
  app->add_option("--catalog", c.catalog, "Catalog id (see `catalog list`)");
  app->add_option("--role", c.role, "Spec role within the catalog entry");
  app->add_option("--H", c.H, "Inline dual pair: H");
  app->add_option("--V", c.V, "Inline dual pair: V");
  app->add_option("--v", c.v, "Inline dual pair: weight v (default 1)");
  app->add_option("--G", c.G, "Inline primal pair: G");
  app->add_option("--W", c.W, "Inline primal pair: W");
  app->add_option("--w", c.w, "Inline primal pair: weight w (default 1)");
  app->add_option("--z", c.z, "Inline Bessel potential: z");
  app->add_option("--Z", c.Z, "Inline Bessel potential: Z");
  app->add_flag("--signed", c.signed_potential, "Allow the inline potential to change sign");
  app->add_option("--n", c.n, "Dimension");
  app->add_option("--kappa", c.kappa, "Curvature parameter (0 = Euclidean)");
  app->add_option("--R", c.R, "Domain radius (default unbounded)");
  app->add_option("--lambda", c.lambda, "Family parameter lambda");
  app->add_option("--k", c.k, "Family parameter k");
  app->add_option("--c", c.c, "Bessel potential constant (inline, default 1/4)");
}

void add_scan(CLI::App* app, RunConfig& c) {
  app->add_option("--grid", c.grid, "Scan grid points")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tol", c.tol, "Relative scan tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--lo", c.lo, "Scan interval start (0 = default)");
  app->add_option("--hi", c.hi, "Scan interval end (0 = default)");
}

void add_quad(CLI::App* app, RunConfig& c) {
  app->add_option("--quad-tol", c.quad_tol, "Relative quadrature tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

void add_batch(CLI::App* app, RunConfig& c) {
  app->add_option("--tests", c.tests, "Batch size")->capture_default_str()->check(CLI::NonNegativeNumber);
  app->add_option("--seed", c.seed, "Batch seed")->capture_default_str();
  app->add_option("--modes", c.modes, "Spherical harmonic degrees, comma separated")->delimiter(',');
  app->add_flag("--sequential{false}", c.parallel, "Evaluate tests on one thread");
}

void add_output(CLI::App* app, RunConfig& c) {
  app->add_option("-o,--output", c.output, "Report path (default stdout)");
  app->add_option("--format", c.format, "json or csv")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}));
  app->add_option("--timestamp", c.timestamp, "Fixed timestamp for the report");
}

void build(CLI::App& app, RunConfig& c) {
  app.require_subcommand(1);
  auto* check = app.add_subcommand("check-pair", "Defining residual of a pair on a log grid");
  add_source(check, c);
  add_scan(check, c);
  add_output(check, c);

  auto* scan = app.add_subcommand("scan", "Positivity scan of a derived quantity");
  add_source(scan, c);
  add_scan(scan, c);
  add_output(scan, c);
  scan->add_option("--target", c.target, "E1, E2, V, W, Z or expr");
  scan->add_option("--expr", c.expr, "Expression scanned with --target expr");

  auto* verify = app.add_subcommand("verify", "Integral inequality on a seeded batch of test functions");
  add_source(verify, c);
  add_scan(verify, c);
  add_quad(verify, c);
  add_batch(verify, c);
  add_output(verify, c);
  verify->add_option("--shape", c.shape, "delta-vs-gradrad, delta-vs-grad or gradrad-vs-usq");

  auto* chain = app.add_subcommand("chain", "Chain of inequalities of a catalog entry");
  add_source(chain, c);
  add_scan(chain, c);
  add_quad(chain, c);
  add_batch(chain, c);
  add_output(chain, c);

  auto* bessel = app.add_subcommand("solve-bessel", "Disconjugacy of a Bessel potential or pair");
  add_source(bessel, c);
  add_output(bessel, c);
  bessel->add_option("--depth", c.depth, "Start at R exp(-depth)")->capture_default_str();

  auto* est = app.add_subcommand("estimate", "Rayleigh quotient minimization over power-law test functions");
  add_source(est, c);
  add_quad(est, c);
  add_output(est, c);
  est->add_option("--shape", c.shape, "delta-vs-gradrad, delta-vs-grad, gradrad-vs-usq or chain");
  est->add_option("--budget", c.budget, "Quotient evaluations")->capture_default_str()->check(CLI::PositiveNumber);
  est->add_option("--claimed", c.claimed, "Constant divided out of the right side");
  est->add_option("--mode", c.mode, "Spherical harmonic degree")->check(CLI::NonNegativeNumber);

  auto* cat = app.add_subcommand("catalog", "List or show catalog entries");
  cat->require_subcommand(1);
  auto* list = cat->add_subcommand("list", "All catalog ids");
  add_output(list, c);
  auto* show = cat->add_subcommand("show", "One entry with its expressions");
  show->add_option("id", c.catalog, "Catalog id")->required();
  show->add_option("--n", c.n);
  show->add_option("--kappa", c.kappa);
  show->add_option("--R", c.R);
  show->add_option("--lambda", c.lambda);
  show->add_option("--k", c.k);
  add_output(show, c);
}

bool any_inline(const RunConfig& c) { return c.H || c.V || c.v || c.G || c.W || c.w || c.z || c.Z; }

void validate(RunConfig& c) {
  if (c.command == "catalog") return;
  const bool dual = c.H || c.V || c.v, primal = c.G || c.W || c.w, pot = c.z || c.Z;
  if (c.catalog && any_inline(c)) throw UsageError("give either --catalog or inline expressions, not both");
  if (!c.catalog && !any_inline(c)) throw UsageError("a pair source is required: --catalog ID or inline expressions");
  if (int(dual) + int(primal) + int(pot) > 1) throw UsageError("inline expressions mix dual, primal and potential fields");
  if (dual && !(c.H && c.V)) throw UsageError("an inline dual pair needs --H and --V");
  if (primal && !(c.G && c.W)) throw UsageError("an inline primal pair needs --G and --W");
  if (pot && !(c.z && c.Z)) throw UsageError("an inline Bessel potential needs --z and --Z");
  if (c.command == "chain" && !c.catalog) throw UsageError("chain needs a catalog entry");
  if (c.command == "scan" && c.target == "expr" && !c.expr) throw UsageError("--target expr needs --expr");
  if (c.modes.empty()) throw UsageError("--modes must list at least one degree");
  for (int m : c.modes)
    if (m < 0) throw UsageError("--modes entries must be >= 0");
}

}  // namespace

std::string usage() {
  RunConfig c;
  CLI::App app("Numerical checks of Hardy and Rellich type inequalities built from Bessel pairs", "rellich");
  build(app, c);
  return app.help();
}

RunConfig parse_args(const std::vector<std::string>& args) {
  RunConfig c;
  CLI::App app("Numerical checks of Hardy and Rellich type inequalities built from Bessel pairs", "rellich");
  build(app, c);
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* deepest = &app;
    while (!deepest->get_subcommands().empty()) deepest = deepest->get_subcommands().front();
    throw HelpRequested(deepest->help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  for (const auto* sub : app.get_subcommands()) {
    c.command = sub->get_name();
    for (const auto* s2 : sub->get_subcommands()) c.action = s2->get_name();
  }
  validate(c);
  return c;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  auto opt = [](const auto& o) -> nlohmann::ordered_json {
    if (o) return *o;
    return nullptr;
  };
  j["command"] = command;
  if (!action.empty()) j["action"] = action;
  nlohmann::ordered_json src;
  if (catalog) {
    src["catalog"] = *catalog;
    src["role"] = role;
  } else {
    for (auto [name, field] : {std::pair{"H", &H}, {"V", &V}, {"v", &v}, {"G", &G}, {"W", &W}, {"w", &w},
                               {"z", &z}, {"Z", &Z}})
      if (*field) src[name] = **field;
    src["signed"] = signed_potential;
  }
  j["source"] = src;
  j["n"] = opt(n);
  j["kappa"] = opt(kappa);
  j["R"] = R && std::isfinite(*R) ? nlohmann::ordered_json(*R) : nlohmann::ordered_json(nullptr);
  j["lambda"] = opt(lambda);
  j["k"] = opt(k);
  j["c"] = opt(c);
  j["target"] = target;
  j["expr"] = opt(expr);
  j["shape"] = shape;
  j["grid"] = grid;
  j["tol"] = tol;
  j["lo"] = lo;
  j["hi"] = hi;
  j["quad_tol"] = quad_tol;
  j["tests"] = tests;
  j["seed"] = seed;
  j["modes"] = modes;
  j["budget"] = budget;
  j["claimed"] = opt(claimed);
  j["mode"] = mode;
  j["depth"] = depth;
  j["parallel"] = parallel;
  j["format"] = format == Format::json ? "json" : "csv";
  return j;
}

}  // namespace rellich::cli
