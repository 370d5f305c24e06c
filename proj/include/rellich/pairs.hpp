#pragma once

// Riccati, dual Riccati, Bessel potential and Bessel pair objects: residuals,
// side conditions, constructions between them, positivity scans and ODE
// disconjugacy checks.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rellich/expr.hpp"
#include "rellich/geometry.hpp"

namespace rellich::pairs {

using expr::Bindings;
using expr::Expression;
using geometry::SpaceForm;

enum class PairKind { primal, dual, bessel_potential, bessel_pair };
std::string_view kind_name(PairKind k);

// Derivative fields (dG, dlog_w, ...) are filled in by the PairSpec factories.
struct PrimalPair {
  Expression G, w, W;
  Expression dG, dlog_w;
};

struct DualPair {
  Expression H, v, V;
  Expression dH, dlog_v;
};

struct BesselPotential {
  Expression z, Z;
  double c = 0.0;
  Expression dz, d2z;
};

struct BesselPair {
  std::optional<Expression> y;
  Expression X, Y;
  double C = 1.0;
  Expression dy, d2y, dlog_X;
};

class PairSpec {
 public:
  /// `dlog_w` may be supplied when w underflows on part of the domain (w = 1/sinh^2).
  static PairSpec primal(Expression G, Expression w, Expression W, Bindings params = {},
                         std::optional<Expression> dlog_w = std::nullopt);
  static PairSpec dual(Expression H, Expression v, Expression V, Bindings params = {},
                       std::optional<Expression> dlog_v = std::nullopt);
  static PairSpec bessel_potential(Expression z, Expression Z, double c, Bindings params = {});
  static PairSpec bessel_pair(std::optional<Expression> y, Expression X, Expression Y, double C,
                              Bindings params = {});

  PairKind kind() const;
  /// Role accessors; throw InvalidArgument on a kind mismatch.
  const PrimalPair& as_primal() const;
  const DualPair& as_dual() const;
  const BesselPotential& as_potential() const;
  const BesselPair& as_bessel_pair() const;

  const Bindings& params() const { return params_; }
  /// Parameters overlaid with n, kappa (and a finite R) of the space form.
  Bindings bindings(const SpaceForm& sf) const;

  /// Allow W (or V) to take negative values; reports carry a warning.
  bool signed_potential() const { return signed_; }
  PairSpec with_signed_potential(bool on) const;
  const std::string& note() const { return note_; }
  PairSpec with_note(std::string note) const;

 private:
  std::variant<PrimalPair, DualPair, BesselPotential, BesselPair> body_;
  Bindings params_;
  bool signed_ = false;
  std::string note_;
};

/// A residual or side-condition value with the sum of the absolute values of
/// its terms; tolerances are applied relative to max(1, magnitude).
struct Sample {
  double value = 0.0;
  double magnitude = 0.0;
  double relative() const;
};

// G' + (L + w'/w) G - G^2 - W
Sample riccati_residual_terms(const SpaceForm& sf, const PairSpec& p, double t);
double riccati_residual(const SpaceForm& sf, const PairSpec& p, double t);
// -H' + (L - v'/v) H - H^2 - V
Sample dual_riccati_residual_terms(const SpaceForm& sf, const PairSpec& p, double t);
double dual_riccati_residual(const SpaceForm& sf, const PairSpec& p, double t);
// (vH)' + vH (L - 2 ct)
Sample e1_terms(const SpaceForm& sf, const PairSpec& p, double t);
double e1(const SpaceForm& sf, const PairSpec& p, double t);
// 2 (vH)' + vH (H - 2 ct)
Sample e2_terms(const SpaceForm& sf, const PairSpec& p, double t);
double e2(const SpaceForm& sf, const PairSpec& p, double t);
// z'' + z'/t + c Z z
Sample bessel_potential_residual_terms(const PairSpec& p, double t);
double bessel_potential_residual(const PairSpec& p, double t);
// y'' + ((n-1)/t + X'/X) y' + C Y/X y
Sample bessel_pair_residual_terms(const PairSpec& p, int n, double t);
double bessel_pair_residual(const PairSpec& p, int n, double t);
/// The defining residual of whatever kind `p` is (Euclidean t for Bessel objects).
Sample defining_residual(const SpaceForm& sf, const PairSpec& p, double t);

/// H = L - G, v = w, V = W - (w'/w) L - L'.
PairSpec primal_to_dual(const PairSpec& p, const SpaceForm& sf);
/// G = L - H, w = v, W = V + (v'/v) L + L'.
PairSpec dual_to_primal(const PairSpec& p, const SpaceForm& sf);

enum class PotentialConstruction { to_bessel_pair, to_primal, to_dual };

/// Builds a Bessel pair, primal or dual spec out of a Bessel potential in
/// dimension n. Throws InvalidArgument when the potential residual does not
/// vanish on a log grid over (0, R).
PairSpec from_bessel_potential(const PairSpec& p, PotentialConstruction variant, int n);
/// G = -y'/y, w = X, W = C Y / X. Requires an explicit y.
PairSpec from_bessel_pair(const PairSpec& p, int n);

struct WeightedBesselPairs {
  PairSpec first;   // (1/t^2, (n-4)^2/(4t^4) + c Z/t^2) with y = z t^{-(n-4)/2}
  PairSpec second;  // (Z, (n-lambda-2)^2 Z/(4t^2)), no closed-form y
};
/// Throws InvalidArgument when lambda >= n - 2.
WeightedBesselPairs weighted_bessel_pairs(const PairSpec& potential, double lambda, int n);
/// Primal (G, w, W) = ((n-lambda-2)/(2t), Z, (n-lambda-2)^2/(4t^2)) for the
/// second pair. Its residual is (n-lambda-2) f / (2t) with f = Z'/Z + lambda/t.
PairSpec weighted_pair_primal(const PairSpec& potential, double lambda, int n);

enum class Verdict { nonnegative, violated, inconclusive_near_boundary };
std::string_view verdict_name(Verdict v);

struct SignChange {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct PositivityReport {
  std::string target;
  double min_value = 0.0;  // relative to max(1, magnitude)
  double argmin = 0.0;
  std::vector<SignChange> sign_changes;
  std::optional<double> limit_0;
  std::optional<double> limit_R;
  Verdict verdict = Verdict::nonnegative;
  int grid = 0;
  double lo = 0.0, hi = 0.0, tol = 0.0;
  std::string note;
};

struct ResidualReport {
  std::string target;
  double min_value = 0.0;  // relative
  double argmin = 0.0;
  double max_abs = 0.0;    // relative
  double max_abs_raw = 0.0;
  bool equality = false;
  int grid = 0;
  double lo = 0.0, hi = 0.0, tol = 0.0;
};

using ScanFunction = std::function<Sample(double)>;

struct ScanOptions {
  int grid = 10000;
  int refine = 60;  // bisection steps per sign change
  double tol = 1e-9;
  /// Interval; 0 selects (1e-6 R', R') with R' = min(R, 1e3).
  double lo = 0.0, hi = 0.0;
  int richardson_levels = 10;
  bool parallel = true;
};

/// Log-spaced interior grid of `count` points on (lo, hi).
std::vector<double> log_grid(double lo, double hi, int count);
/// Resolves the default scan interval for a space form.
std::pair<double, double> scan_interval(const SpaceForm& sf, const ScanOptions& opt);

PositivityReport scan_positivity(const ScanFunction& f, const SpaceForm& sf, const ScanOptions& opt = {},
                                 std::string target = {});
PositivityReport scan_positivity(const Expression& f, const Bindings& params, const SpaceForm& sf,
                                 const ScanOptions& opt = {}, std::string target = {});
ResidualReport residual_report(const ScanFunction& f, const SpaceForm& sf, const ScanOptions& opt = {},
                               std::string target = {});

/// Richardson extrapolation of f(R (1 - 2^-j)) toward t = R; nullopt when
/// the table does not settle.
std::optional<double> limit_at(const std::function<double(double)>& f, double R, int levels);
/// Same toward t = 0 along t = t0 2^-j.
std::optional<double> limit_at_zero(const std::function<double(double)>& f, double t0, int levels);

struct DisconjugacyOptions {
  /// The integration starts at t0 = R exp(-depth).
  double depth = 1e8;
  double tol = 1e-10;
  long max_steps = 2'000'000;
};

struct DisconjugacyReport {
  bool positive_solution = false;
  bool inconclusive = false;
  std::optional<double> first_zero;      // may underflow to 0; see first_zero_log
  std::optional<double> first_zero_log;  // log of the first zero
  double log_t0 = 0.0;
  double exponent = 0.0;  // indicial exponent of the initial data in t
  long steps = 0;
  std::string note;
};

/// Integrates the Bessel potential or Bessel pair ODE on (t0, R) from the
/// recessive Frobenius data at t0 and reports whether the solution stays positive.
DisconjugacyReport disconjugacy_check(const PairSpec& p, int n, double R, const DisconjugacyOptions& opt = {});

struct PolynomialRoots {
  double q_minus = 0.0;
  double q_plus = 0.0;
  bool criterion() const { return q_minus <= -1.0 && q_plus > 0.0; }
};
/// Roots of -q^2 + (n-4) q + (n^2-4n-1)/2; requires n >= 5.
PolynomialRoots corollary_polynomial_roots(int n);
double corollary_polynomial(int n, double q);

}  // namespace rellich::pairs
