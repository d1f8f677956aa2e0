// Association measures for the family: Spearman's rho in two flavours
// (from the fitted generating function, and rank-based nonparametric),
// Kendall's tau through the family identity 2 rho = 3 tau, and the
// |rho_np - rho_sp| goodness-of-fit diagnostic.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "semicop/basis.hpp"
#include "semicop/fitter.hpp"
#include "semicop/generator.hpp"

namespace semicop {

/// rho = 12 (integral of psi)^2, by Simpson's rule.
inline double rho_true(const Generator& g, int quad_points = 2001) {
  const double integral = generator_integral(g, quad_points);
  return 12.0 * integral * integral;
}

/// rho = 12 (sum_k a_k beta_k)^2 with the closed-form basis integrals.
inline double rho_sp(const std::vector<double>& coeffs, const BasisSet& basis) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("coefficient count does not match basis size");
  double sum = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    sum += coeffs[i] * basis_integral(basis.indices[i]);
  return 12.0 * sum * sum;
}

inline double rho_sp(const FitResult& fit, const BasisSet& basis) {
  return rho_sp(fit.coeffs, basis);
}

namespace detail {

class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(std::size_t(n) + 1, 0) {}
  void add(int i) {
    for (; i < int(tree_.size()); i += i & -i) ++tree_[std::size_t(i)];
  }
  std::int64_t prefix(int i) const {
    std::int64_t s = 0;
    for (; i > 0; i -= i & -i) s += tree_[std::size_t(i)];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

// Number of ordered pairs (i,j) with u_j < u_i and v_j < v_i, counted in
// O(n log n): sweep points in ascending u, querying a Fenwick tree over
// compressed v ranks; points with equal u are queried before insertion so
// ties never count (the inequalities are strict).
inline std::int64_t concordant_pairs(const std::vector<double>& u,
                                     const std::vector<double>& v) {
  const int n = int(u.size());
  std::vector<int> order(std::size_t(n));
  for (int i = 0; i < n; ++i) order[std::size_t(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return u[std::size_t(a)] < u[std::size_t(b)] ||
           (u[std::size_t(a)] == u[std::size_t(b)] && v[std::size_t(a)] < v[std::size_t(b)]);
  });
  std::vector<double> vs(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  const auto vrank = [&](double t) {
    return int(std::lower_bound(vs.begin(), vs.end(), t) - vs.begin()) + 1;
  };
  Fenwick tree(int(vs.size()));
  std::int64_t count = 0;
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n &&
           u[std::size_t(order[std::size_t(j + 1)])] == u[std::size_t(order[std::size_t(i)])])
      ++j;
    for (int t = i; t <= j; ++t)
      count += tree.prefix(vrank(v[std::size_t(order[std::size_t(t)])]) - 1);
    for (int t = i; t <= j; ++t) tree.add(vrank(v[std::size_t(order[std::size_t(t)])]));
    i = j + 1;
  }
  return count;
}

}  // namespace detail

/// Rank-based Spearman estimate 6/(n(n-1)) sum 1{u_j<u_i, v_j<v_i} - 3/2.
inline double rho_np(const PseudoSample& ps) {
  if (ps.n < 2) throw std::invalid_argument("rho_np needs n >= 2");
  const std::int64_t c = detail::concordant_pairs(ps.u, ps.v);
  return 6.0 * double(c) / (double(ps.n) * double(ps.n - 1)) - 1.5;
}

struct AssociationReport {
  double rho_sp = 0.0;
  double rho_np = 0.0;
  double tau_sp = 0.0;  // (2/3) rho_sp
  double tau_np = 0.0;  // (2/3) rho_np
  double gof_diff = 0.0;  // |rho_np - rho_sp|
};

inline AssociationReport association_report(const PseudoSample& ps, const FitResult& fit,
                                            const BasisSet& basis) {
  AssociationReport rep;
  rep.rho_sp = rho_sp(fit, basis);
  rep.rho_np = rho_np(ps);
  rep.tau_sp = 2.0 / 3.0 * rep.rho_sp;
  rep.tau_np = 2.0 / 3.0 * rep.rho_np;
  rep.gof_diff = std::abs(rep.rho_np - rep.rho_sp);
  return rep;
}

}  // namespace semicop
