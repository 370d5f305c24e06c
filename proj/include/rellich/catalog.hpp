#pragma once

// Named, parameterized pair and potential families together with the chains
// of inequalities they compose into.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rellich/pairs.hpp"

namespace rellich::catalog {

using expr::Bindings;
using expr::Expression;
using geometry::SpaceForm;
using pairs::PairSpec;

/// Integral inequality shapes. The left side of the delta shapes is
/// int v |Delta u|^2, of gradrad-vs-usq it is int w |grad_rad u|^2.
enum class Shape { delta_vs_gradrad, delta_vs_grad, gradrad_vs_usq, chain };
std::string_view shape_name(Shape s);
std::optional<Shape> shape_from_name(std::string_view name);

/// coefficient * int density(rho) u^2 dx.
struct ChainTerm {
  std::string label;
  double coefficient = 0.0;
  Expression density;
};

/// coefficient * (int w |grad u|^2 >= int w W u^2) for the primal `spec`.
struct ChainLink {
  std::string name;
  double coefficient = 0.0;
  PairSpec primal;
};

/// int v |Delta u|^2 >= int v V |grad_rad u|^2 with v V = sum_i c_i w_i, followed
/// by the primal links. The end-to-end right side is sum_i c_i w_i W_i u^2,
/// which `final_terms` writes out term by term.
struct Chain {
  std::string id;
  PairSpec dual;
  std::vector<ChainLink> links;
  std::vector<ChainTerm> final_terms;
  /// The right side as it is usually displayed, when that differs from the
  /// composed one.
  std::vector<ChainTerm> printed_terms;
  std::string note;
};

/// sum_i c_i w_i as an expression.
Expression chain_weight_sum(const Chain& c);
/// sum_i c_i w_i W_i.
Expression chain_composed_density(const Chain& c);
/// sum over `terms` of coefficient * density.
Expression terms_density(const std::vector<ChainTerm>& terms);

struct NamedSpec {
  std::string role;
  PairSpec spec;
  std::vector<Shape> shapes;
};

struct ParameterInfo {
  std::string name;
  double value = 0.0;
  std::string range;
};

struct CatalogEntry {
  std::string id;
  std::vector<ParameterInfo> parameters;
  std::vector<NamedSpec> specs;
  std::optional<Chain> chain;
  SpaceForm space;
  std::string provenance;

  /// Throws InvalidArgument for an unknown role.
  const PairSpec& spec(std::string_view role) const;
  const NamedSpec& primary() const { return specs.front(); }
};

// Family constructors. All throw InvalidArgument outside their parameter
// ranges and NumericalFailure if the stated residual or positivity contract
// fails on a 100-point sample.

/// Dual n/(2t), hardy primal (n-2)/(2t), rellich primal (n-4)/(2t) with
/// weight n^2/(4t^2); requires n >= 5.
CatalogEntry classical_euclidean(int n, double R = geometry::kInfinity);

struct IteratedLog {
  PairSpec potential;
  double r = 0.0;
  Expression q;  // t z'/z
  /// Lower bounds of q and of -t^2 Z / 4 on (0, R) that follow from the
  /// products of iterated logarithms being >= 2^{j-1}.
  double q_bound = 0.0;
  double tz_bound = 0.0;
};
/// Z = sum_{j<=k} t^-2 (prod_{i<=j} log_[i](r/t))^-2, z = (prod_{i<=k} log_[i](r/t))^{1/2},
/// c = 1/4, r = R exp_[k-1](e).
IteratedLog iterated_log_potential(int k, double R);
/// Z = sum_{j<=k} t^-2 prod_{i<=j} ell_[i](t/R)^2, z = (prod_{i<=k} ell_[i](t/R))^{-1/2},
/// c = 1/4, ell(x) = 1/(1 - log x).
PairSpec ell_potential(int k, double R);
/// The iterated ell function ell_[k](x) composed onto `x`.
Expression ell_iterated(int k, const Expression& x);

struct Interpolation {
  double gamma = 0.0;
  double h = 0.0;
};
/// gamma = sqrt((n-1)^2 - 4 lambda), h = (gamma + 1)/2.
Interpolation interpolation_constants(int n, double lambda);
/// Dual pair with v = 1 and H = (n/2 - h) ct + h/t; 0 <= lambda <= (n-1)^2/4.
PairSpec hyperbolic_interpolation(int n, double kappa, double lambda);
/// The closed form of E1 for hyperbolic_interpolation.
Expression hyperbolic_interpolation_e1(int n, double h);
/// Primal pairs with w = 1, 1/t^2, 1/sinh^2(kappa t); which in {1, 2, 3}.
PairSpec hyperbolic_lower(int n, double kappa, int which);
/// Density of the right side of the `which` lower bound (the term multiplying u^2).
Expression hyperbolic_lower_density(int n, int which);
/// hyperbolic_interpolation at lambda = (n-1)^2/4 chained with the three lower bounds.
Chain final_combined(int n, double kappa);
/// The potential's dual chained with the weighted Bessel pairs:
/// n^2(n-4)^2/16 int u^2/t^4 + c (n^2/4 + (n-lambda-2)^2/4) int Z u^2/t^2.
Chain weighted_potential_chain(const PairSpec& potential, double lambda, int n, double R);

struct CatalogParams {
  std::optional<int> n;
  std::optional<double> kappa;
  std::optional<double> lambda;
  std::optional<int> k;
  std::optional<double> R;
};

struct CatalogInfo {
  std::string id;
  std::string summary;
  std::vector<std::string> parameters;
};

const std::vector<CatalogInfo>& catalog_list();
/// Throws InvalidArgument for an unknown id or out-of-range parameters.
CatalogEntry make_entry(std::string_view id, const CatalogParams& params = {});

}  // namespace rellich::catalog
