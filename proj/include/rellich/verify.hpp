#pragma once

// Weighted radial quadrature and numerical verification of integral
// inequalities on batches of separated test functions phi(rho) Y_l.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rellich/catalog.hpp"
#include "rellich/geometry.hpp"
#include "rellich/pairs.hpp"

namespace rellich::verify {

using catalog::Chain;
using catalog::Shape;
using expr::Bindings;
using expr::Expression;
using geometry::RadialTestFunction;
using geometry::SpaceForm;
using pairs::PairSpec;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subintervals = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_subintervals = 20000;
};

using Density = std::function<double(double)>;

/// int_a^b f(t) dt, adaptive Gauss-Kronrod (7, 15). Intervals with b/a > 4
/// are integrated in s = log t. `breaks` are interior points where f may be
/// non-smooth. Throws NumericalFailure when the subdivision budget runs out.
QuadratureResult integrate_plain(const Density& f, double a, double b, const QuadratureOptions& opt = {},
                                 const std::vector<double>& breaks = {});
/// int of a radial density over the annulus a < rho < b: f times volume_weight.
QuadratureResult integrate(const SpaceForm& sf, const Density& density, double a, double b,
                           const QuadratureOptions& opt = {}, const std::vector<double>& breaks = {});

/// int v |Delta u|^2 dx.
QuadratureResult lhs_delta_sq(const SpaceForm& sf, const Expression& v, const Bindings& params,
                              const RadialTestFunction& u, const QuadratureOptions& opt = {});

enum class Gradient { gradrad, grad, usq };
std::string_view gradient_name(Gradient g);

/// int f |grad_rad u|^2, int f |grad u|^2 or int f u^2 for the weight f.
QuadratureResult rhs_weighted(const SpaceForm& sf, const Expression& f, const Bindings& params,
                              const RadialTestFunction& u, Gradient which, const QuadratureOptions& opt = {});

struct Batch {
  int count = 50;
  std::uint64_t seed = 42;
  /// Spherical harmonic degrees, assigned round robin.
  std::vector<int> modes = {0};
};

/// Bumps with support endpoints drawn log-uniformly from (0.02 R_b, 0.98 R_b),
/// R_b = min(R, 10).
std::vector<RadialTestFunction> make_batch(const SpaceForm& sf, const Batch& batch);

struct InequalityCase {
  std::string id;
  Shape shape = Shape::delta_vs_gradrad;
  /// Dual spec for the delta shapes, primal for gradrad-vs-usq; unused for chains.
  std::optional<PairSpec> spec;
  std::optional<Chain> chain;
  SpaceForm sf;
  Batch batch;
  pairs::ScanOptions scan;
  QuadratureOptions quad;
  bool parallel = true;
};

struct TestRecord {
  int index = 0;
  std::string link;  // "inequality", a chain link name, or "end-to-end"
  std::string function;
  int mode = 0;
  double lhs = 0.0, rhs = 0.0, margin = 0.0, budget = 0.0;
  bool pass = false;
};

struct ScanSummary {
  std::string target;
  pairs::Verdict verdict = pairs::Verdict::nonnegative;
  double min_value = 0.0;
  double argmin = 0.0;
  std::optional<double> limit_R;
  std::string note;
  /// Whether the verdict depends on this scan (false for signed potentials).
  bool required = true;
};

enum class Outcome { pass, fail, inconclusive };
std::string_view outcome_name(Outcome o);

struct VerificationReport {
  std::string case_id;
  Shape shape = Shape::delta_vs_gradrad;
  SpaceForm sf;
  std::uint64_t seed = 0;
  std::vector<TestRecord> tests;
  std::vector<ScanSummary> scans;
  Outcome verdict = Outcome::pass;
  std::vector<std::string> notes;

  /// Recomputes the verdict rule from the records: pass requires every
  /// margin >= -budget and every scan nonnegative.
  bool consistent() const;
};

/// Budget of one comparison: both quadrature error estimates plus 64 eps (|lhs| + |rhs|).
double comparison_budget(const QuadratureResult& lhs, const QuadratureResult& rhs);

/// Throws InvalidArgument when the case is incoherent.
VerificationReport verify_case(const InequalityCase& c);
/// Throws InvalidArgument on a weight mismatch, naming the link sums compared.
VerificationReport verify_chain(const Chain& chain, const SpaceForm& sf, const Batch& batch,
                                const pairs::ScanOptions& scan = {}, const QuadratureOptions& quad = {},
                                bool parallel = true);

}  // namespace rellich::verify
