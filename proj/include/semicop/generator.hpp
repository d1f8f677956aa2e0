// The semiparametric copula family C(u,v) = uv + psi(u) psi(v).
//
// A Generator holds the univariate function psi.  Valid generators vanish
// at 0 and 1 and are 1-Lipschitz; nonnegative psi additionally gives
// positive quadrant dependence.  Supported kinds:
//   analytic(k) : psi(x) = 1 - (x^k + (1-x)^k)^(1/k), k >= 1, k = +inf
//                 allowed as the limit min(x, 1-x) (non-differentiable).
//   fgm(theta)  : sqrt(theta) x (1-x), theta in (0,1].
//   cubic(theta): sqrt(theta) x (1-x) (1-2x), theta in (0,1].
//   fitted      : a coefficient vector over a dyadic sine BasisSet.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semicop/basis.hpp"
#include "semicop/quadrature.hpp"

namespace semicop {

enum class GeneratorKind { analytic, fgm, cubic, fitted };

class Generator {
 public:
  static Generator analytic(double k) {
    if (std::isnan(k) || k < 1.0)
      throw std::invalid_argument("analytic generator requires k >= 1");
    Generator g(GeneratorKind::analytic);
    g.k_ = k;
    return g;
  }

  static Generator fgm(double theta) {
    Generator g(GeneratorKind::fgm);
    g.root_theta_ = checked_root_theta(theta);
    return g;
  }

  static Generator cubic(double theta) {
    Generator g(GeneratorKind::cubic);
    g.root_theta_ = checked_root_theta(theta);
    return g;
  }

  static Generator fitted(BasisSet basis, std::vector<double> coeffs) {
    if (basis.size() != coeffs.size())
      throw std::invalid_argument("coefficient count does not match basis size");
    Generator g(GeneratorKind::fitted);
    g.basis_ = std::move(basis);
    g.coeffs_ = std::move(coeffs);
    return g;
  }

  GeneratorKind kind() const { return kind_; }
  double analytic_k() const { return k_; }
  const BasisSet& basis() const { return basis_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// False only for analytic k = inf (kink at 1/2).
  bool differentiable() const {
    return !(kind_ == GeneratorKind::analytic && std::isinf(k_));
  }

  /// psi(x) for x in [0,1].
  double value(double x) const {
    detail::require_unit(x, "generator argument");
    switch (kind_) {
      case GeneratorKind::analytic: {
        if (x == 0.0 || x == 1.0) return 0.0;
        if (std::isinf(k_)) return std::min(x, 1.0 - x);
        if (k_ == 1.0) return 0.0;
        // 1 - M (1 + r^k)^(1/k) with M = max(x,1-x): stable for large k.
        const double hi = std::max(x, 1.0 - x);
        const double r = std::min(x, 1.0 - x) / hi;
        return 1.0 - hi * std::exp(std::log1p(std::pow(r, k_)) / k_);
      }
      case GeneratorKind::fgm:
        return root_theta_ * x * (1.0 - x);
      case GeneratorKind::cubic:
        return root_theta_ * x * (1.0 - x) * (1.0 - 2.0 * x);
      case GeneratorKind::fitted: {
        double sum = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
          if (coeffs_[i] != 0.0) sum += coeffs_[i] * basis_eval(basis_.indices[i], x);
        return sum;
      }
    }
    return 0.0;
  }

  /// psi'(x) for x in (0,1).  Fitted generators use the basis derivative
  /// convention (one-sided at interior support endpoints).
  double slope(double x) const {
    if (!(x > 0.0 && x < 1.0))
      throw std::domain_error("generator slope requires x in (0,1)");
    switch (kind_) {
      case GeneratorKind::analytic: {
        if (std::isinf(k_))
          throw std::domain_error("generator with k = inf is not differentiable");
        if (k_ == 1.0) return 0.0;
        const double hi = std::max(x, 1.0 - x);
        const double r = std::min(x, 1.0 - x) / hi;
        const double mag = (1.0 - std::pow(r, k_ - 1.0)) *
                           std::exp(std::log1p(std::pow(r, k_)) * (1.0 - k_) / k_);
        return x > 0.5 ? -mag : mag;
      }
      case GeneratorKind::fgm:
        return root_theta_ * (1.0 - 2.0 * x);
      case GeneratorKind::cubic:
        return root_theta_ * (1.0 - 6.0 * x + 6.0 * x * x);
      case GeneratorKind::fitted: {
        double sum = 0.0;
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
          if (coeffs_[i] != 0.0) sum += coeffs_[i] * basis_deriv(basis_.indices[i], x);
        return sum;
      }
    }
    return 0.0;
  }

 private:
  explicit Generator(GeneratorKind kind) : kind_(kind) {}

  static double checked_root_theta(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
      throw std::invalid_argument("theta must lie in (0,1]");
    return std::sqrt(theta);
  }

  GeneratorKind kind_;
  double k_ = 1.0;
  double root_theta_ = 0.0;
  BasisSet basis_;
  std::vector<double> coeffs_;
};

/// C(u,v) = uv + psi(u) psi(v) on the unit square.
inline double copula_cdf(const Generator& g, double u, double v) {
  detail::require_unit(u, "copula argument u");
  detail::require_unit(v, "copula argument v");
  return u * v + g.value(u) * g.value(v);
}

/// P(V <= v | U = u) = v + psi'(u) psi(v); u in (0,1).
inline double conditional_cdf(const Generator& g, double u, double v) {
  detail::require_unit(v, "conditional argument v");
  return v + g.slope(u) * g.value(v);
}

/// Integral of psi over [0,1] by Simpson's rule.
inline double generator_integral(const Generator& g, int quad_points = 2001) {
  return simpson_unit([&](double x) { return g.value(x); }, quad_points);
}

/// L2 distance between two generating functions.
inline double l2_distance(const Generator& a, const Generator& b, int quad_points = 2001) {
  const double sq = simpson_unit(
      [&](double x) {
        const double d = a.value(x) - b.value(x);
        return d * d;
      },
      quad_points);
  return std::sqrt(std::max(0.0, sq));
}

// ---- grid validation -------------------------------------------------

struct ValidationConfig {
  int grid_n = 201;
  std::optional<double> tol_lip;  // default: 1e-9 analytic kinds, 1e-6 fitted
  double tol_neg = 1e-9;
};

struct ValidityCheck {
  bool ok = true;
  double worst = 0.0;    // largest violation magnitude observed
  double where = 0.0;    // grid point (interval left endpoint) of the worst case
};

struct ValidityReport {
  ValidityCheck boundary;   // psi(0) = psi(1) = 0
  ValidityCheck lipschitz;  // |dpsi| <= dx + tol on adjacent grid pairs
  ValidityCheck nonneg;     // psi >= -tol (the positive-dependence form)
  ValidityCheck rectangle;  // rectangle mass >= -tol on atomic grid cells
  double tol_lip = 0.0;
  bool all_ok() const { return boundary.ok && lipschitz.ok && nonneg.ok && rectangle.ok; }
};

// Grid sweep of the generator conditions.  Rectangle positivity is checked
// on atomic grid cells; additivity of rectangle mass extends the bound to
// every rectangle with corners on the grid.
inline ValidityReport validate_generator(const Generator& g, ValidationConfig cfg = {}) {
  if (cfg.grid_n < 3) throw std::invalid_argument("grid_n must be >= 3");
  if (cfg.tol_neg <= 0.0) throw std::invalid_argument("tolerances must be positive");
  const double tol_lip = cfg.tol_lip.value_or(
      g.kind() == GeneratorKind::fitted ? 1e-6 : 1e-9);
  if (tol_lip <= 0.0) throw std::invalid_argument("tolerances must be positive");

  ValidityReport rep;
  rep.tol_lip = tol_lip;
  const int n = cfg.grid_n;
  std::vector<double> psi(n);
  for (int i = 0; i < n; ++i) psi[i] = g.value(double(i) / (n - 1));

  const double b = std::max(std::abs(psi.front()), std::abs(psi.back()));
  rep.boundary.ok = b <= 1e-12;
  rep.boundary.worst = b;
  rep.boundary.where = std::abs(psi.front()) >= std::abs(psi.back()) ? 0.0 : 1.0;

  const double dx = 1.0 / (n - 1);
  double worst_lip = 0.0, worst_neg = 0.0;
  int at_lip = 0, at_neg = 0;
  double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
  int at_dmin = 0, at_dmax = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = psi[i + 1] - psi[i];
    const double excess = std::abs(d) - dx;
    if (excess > worst_lip) { worst_lip = excess; at_lip = i; }
    if (d < dmin) { dmin = d; at_dmin = i; }
    if (d > dmax) { dmax = d; at_dmax = i; }
  }
  for (int i = 0; i < n; ++i)
    if (-psi[i] > worst_neg) { worst_neg = -psi[i]; at_neg = i; }

  rep.lipschitz.ok = worst_lip <= tol_lip;
  rep.lipschitz.worst = std::max(0.0, worst_lip);
  rep.lipschitz.where = at_lip * dx;

  rep.nonneg.ok = worst_neg <= cfg.tol_neg;
  rep.nonneg.worst = std::max(0.0, worst_neg);
  rep.nonneg.where = at_neg * dx;

  // Worst atomic cell mass is dx^2 + min over products of two increments.
  const double worst_prod = std::min({dmin * dmax, dmin * dmin, dmax * dmax});
  const double worst_cell = dx * dx + worst_prod;
  rep.rectangle.ok = worst_cell >= -cfg.tol_neg;
  rep.rectangle.worst = std::max(0.0, -worst_cell);
  rep.rectangle.where = (worst_prod == dmax * dmax ? at_dmax : at_dmin) * dx;
  return rep;
}

}  // namespace semicop
