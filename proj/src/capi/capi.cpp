#include "rellich/rellich_c.h"

#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "rellich/catalog.hpp"
#include "rellich/cli.hpp"

struct rellich_expr {
  rellich::expr::Expression e;
};

struct rellich_pair {
  rellich::pairs::PairSpec spec;
};

struct rellich_report {
  rellich::cli::Report report;
};

namespace {

using namespace rellich;

thread_local std::string g_error;

rellich_status fail(rellich_status s, const std::string& msg) {
  g_error = msg;
  return s;
}

// Maps the library's exceptions onto status codes.
template <class F>
rellich_status guarded(F&& f) {
  try {
    g_error.clear();
    return f();
  } catch (const ParseError& e) {
    return fail(RELLICH_E_PARSE, e.what());
  } catch (const cli::UsageError& e) {
    return fail(RELLICH_E_INVALID, e.what());
  } catch (const cli::IoError& e) {
    return fail(RELLICH_E_IO, e.what());
  } catch (const UnboundParameterError& e) {
    return fail(RELLICH_E_UNBOUND, e.what());
  } catch (const DomainError& e) {
    return fail(RELLICH_E_DOMAIN, e.what());
  } catch (const InvalidArgument& e) {
    return fail(RELLICH_E_INVALID, e.what());
  } catch (const NumericalFailure& e) {
    return fail(RELLICH_E_NUMERICAL, e.what());
  } catch (const std::exception& e) {
    return fail(RELLICH_E_INTERNAL, e.what());
  } catch (...) {
    return fail(RELLICH_E_INTERNAL, "unknown error");
  }
}

rellich_status copy_text(const std::string& text, char* buf, size_t size, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf || size < text.size() + 1)
    return fail(RELLICH_E_BUFFER, "buffer of " + std::to_string(size) + " bytes is too small; " +
                                      std::to_string(text.size() + 1) + " needed");
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  return RELLICH_OK;
}

expr::Bindings bindings_of(const rellich_param* params, size_t count) {
  expr::Bindings b;
  if (count > 0 && !params) throw InvalidArgument("params is NULL but count is nonzero");
  for (size_t i = 0; i < count; ++i) {
    if (!params[i].name) throw InvalidArgument("parameter name is NULL");
    const auto p = expr::param_from_name(params[i].name);
    if (!p) throw InvalidArgument(std::string("unknown parameter '") + params[i].name + "'");
    b.set(*p, params[i].value);
  }
  return b;
}

geometry::SpaceForm space_of(const rellich_space_form* sf) { return geometry::SpaceForm(sf->n, sf->kappa, sf->R); }

std::vector<std::string> args_of(int argc, const char* const* argv) {
  if (argc < 0 || (argc > 0 && !argv)) throw InvalidArgument("argv is NULL");
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) {
    if (!argv[i]) throw InvalidArgument("argv entry is NULL");
    args.emplace_back(argv[i]);
  }
  return args;
}

}  // namespace

extern "C" {

const char* rellich_version(void) { return "0.1.0"; }

const char* rellich_last_error(void) { return g_error.c_str(); }

const char* rellich_status_name(rellich_status s) {
  switch (s) {
    case RELLICH_OK:
      return "ok";
    case RELLICH_E_NULL:
      return "null-argument";
    case RELLICH_E_INVALID:
      return "invalid-argument";
    case RELLICH_E_PARSE:
      return "parse-error";
    case RELLICH_E_UNBOUND:
      return "unbound-parameter";
    case RELLICH_E_DOMAIN:
      return "domain-error";
    case RELLICH_E_NUMERICAL:
      return "numerical-failure";
    case RELLICH_E_IO:
      return "io-error";
    case RELLICH_E_BUFFER:
      return "buffer-too-small";
    case RELLICH_E_INTERNAL:
      return "internal-error";
  }
  return "unknown";
}

rellich_status rellich_expr_parse(const char* text, rellich_expr** out) {
  if (!text || !out) return fail(RELLICH_E_NULL, "rellich_expr_parse: NULL argument");
  return guarded([&] {
    *out = new rellich_expr{expr::parse(text)};
    return RELLICH_OK;
  });
}

void rellich_expr_free(rellich_expr* e) { delete e; }

rellich_status rellich_expr_print(const rellich_expr* e, char* buf, size_t size, size_t* needed) {
  if (!e) return fail(RELLICH_E_NULL, "rellich_expr_print: NULL expression");
  return guarded([&] { return copy_text(expr::print(e->e), buf, size, needed); });
}

rellich_status rellich_expr_eval(const rellich_expr* e, double t, const rellich_param* params, size_t count,
                                 double* out) {
  if (!e || !out) return fail(RELLICH_E_NULL, "rellich_expr_eval: NULL argument");
  return guarded([&] {
    *out = expr::evaluate(e->e, bindings_of(params, count).at(t));
    return RELLICH_OK;
  });
}

rellich_status rellich_expr_derivative(const rellich_expr* e, const char* var, rellich_expr** out) {
  if (!e || !var || !out) return fail(RELLICH_E_NULL, "rellich_expr_derivative: NULL argument");
  return guarded([&] {
    *out = new rellich_expr{expr::differentiate(e->e, var)};
    return RELLICH_OK;
  });
}

rellich_status rellich_pair_dual(const char* H, const char* v, const char* V, const rellich_param* params,
                                 size_t count, rellich_pair** out) {
  if (!H || !V || !out) return fail(RELLICH_E_NULL, "rellich_pair_dual: NULL argument");
  return guarded([&] {
    *out = new rellich_pair{pairs::PairSpec::dual(expr::parse(H), expr::parse(v ? v : "1"), expr::parse(V),
                                                  bindings_of(params, count))};
    return RELLICH_OK;
  });
}

rellich_status rellich_pair_primal(const char* G, const char* w, const char* W, const rellich_param* params,
                                   size_t count, rellich_pair** out) {
  if (!G || !W || !out) return fail(RELLICH_E_NULL, "rellich_pair_primal: NULL argument");
  return guarded([&] {
    *out = new rellich_pair{pairs::PairSpec::primal(expr::parse(G), expr::parse(w ? w : "1"), expr::parse(W),
                                                    bindings_of(params, count))};
    return RELLICH_OK;
  });
}

rellich_status rellich_pair_catalog(const char* id, const char* role, const rellich_param* params, size_t count,
                                    rellich_pair** out, rellich_space_form* sf) {
  if (!id || !out) return fail(RELLICH_E_NULL, "rellich_pair_catalog: NULL argument");
  return guarded([&] {
    const expr::Bindings b = bindings_of(params, count);
    catalog::CatalogParams cp;
    using expr::Param;
    if (auto x = b.get(Param::n)) cp.n = static_cast<int>(*x);
    if (auto x = b.get(Param::kappa)) cp.kappa = *x;
    if (auto x = b.get(Param::lambda)) cp.lambda = *x;
    if (auto x = b.get(Param::k)) cp.k = static_cast<int>(*x);
    if (auto x = b.get(Param::R)) cp.R = *x;
    const catalog::CatalogEntry e = catalog::make_entry(id, cp);
    const pairs::PairSpec& spec = role && *role ? e.spec(role) : e.primary().spec;
    *out = new rellich_pair{spec};
    if (sf) *sf = {e.space.n, e.space.kappa, e.space.R};
    return RELLICH_OK;
  });
}

void rellich_pair_free(rellich_pair* p) { delete p; }

rellich_status rellich_pair_residual(const rellich_pair* p, const rellich_space_form* sf, double t, double* out) {
  if (!p || !sf || !out) return fail(RELLICH_E_NULL, "rellich_pair_residual: NULL argument");
  return guarded([&] {
    *out = pairs::defining_residual(space_of(sf), p->spec, t).value;
    return RELLICH_OK;
  });
}

rellich_status rellich_pair_e1(const rellich_pair* p, const rellich_space_form* sf, double t, double* out) {
  if (!p || !sf || !out) return fail(RELLICH_E_NULL, "rellich_pair_e1: NULL argument");
  return guarded([&] {
    *out = pairs::e1(space_of(sf), p->spec, t);
    return RELLICH_OK;
  });
}

rellich_status rellich_pair_e2(const rellich_pair* p, const rellich_space_form* sf, double t, double* out) {
  if (!p || !sf || !out) return fail(RELLICH_E_NULL, "rellich_pair_e2: NULL argument");
  return guarded([&] {
    *out = pairs::e2(space_of(sf), p->spec, t);
    return RELLICH_OK;
  });
}

rellich_status rellich_run(int argc, const char* const* argv, rellich_report** out) {
  if (!out) return fail(RELLICH_E_NULL, "rellich_run: NULL output");
  return guarded([&] {
    const cli::RunConfig cfg = cli::parse_args(args_of(argc, argv));
    auto* r = new rellich_report{cli::execute(cfg)};
    try {
      if (!cfg.output.empty()) cli::write_atomic(cfg.output, cli::format_report(r->report, cfg.format));
    } catch (...) {
      delete r;
      throw;
    }
    *out = r;
    return RELLICH_OK;
  });
}

void rellich_report_free(rellich_report* r) { delete r; }

rellich_verdict rellich_report_verdict(const rellich_report* r) {
  if (!r) return RELLICH_INCONCLUSIVE;
  return static_cast<rellich_verdict>(cli::exit_code(r->report));
}

int rellich_report_exit_code(const rellich_report* r) { return r ? cli::exit_code(r->report) : cli::kExitUsage; }

size_t rellich_report_test_count(const rellich_report* r) { return r ? r->report.tests.size() : 0; }

size_t rellich_report_scan_count(const rellich_report* r) { return r ? r->report.scans.size() : 0; }

rellich_status rellich_report_json(const rellich_report* r, char* buf, size_t size, size_t* needed) {
  if (!r) return fail(RELLICH_E_NULL, "rellich_report_json: NULL report");
  return guarded([&] { return copy_text(cli::format_report(r->report, cli::Format::json), buf, size, needed); });
}

rellich_status rellich_report_csv(const rellich_report* r, char* buf, size_t size, size_t* needed) {
  if (!r) return fail(RELLICH_E_NULL, "rellich_report_csv: NULL report");
  return guarded([&] { return copy_text(cli::format_report(r->report, cli::Format::csv), buf, size, needed); });
}

int rellich_main(int argc, const char* const* argv) {
  if (argc < 1 || !argv) return cli::kExitUsage;
  try {
    return cli::run(args_of(argc - 1, argv + 1), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::kExitInconclusive;
  }
}

}  // extern "C"
