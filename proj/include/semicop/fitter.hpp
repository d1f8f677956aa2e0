// Estimation of the generating function from data.
//
// Pipeline: rank-transform the sample to pseudo-observations, take
// w_i = max(u_i, v_i) whose CDF is w^2 + psi(w)^2, and fit the basis
// expansion of psi by constrained least squares:
//
//   minimize ||M a - b||^2 + ridge ||a||^2
//   subject to (M a)_i >= 0 and -1 <= (M' a)_i <= 1
//
// with M_{ik} = e_k(w_(i)), M'_{ik} = e'_k(w_(i)) at the order statistics,
// and b_i = sqrt(max(0, i/(n+1) - w_(i)^2)).  In addition to the rows at
// the order statistics, build_problem emits "guard" rows enforcing the same
// positivity and |slope| <= 1 conditions on the dyadic grid j/2^(smax+1):
// without them the least-squares optimum can place huge canceling
// coefficients on overlapping fine-scale functions that behave at the data
// knots but oscillate violently between them.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "semicop/basis.hpp"
#include "semicop/generator.hpp"
#include "semicop/qp.hpp"

namespace semicop {

struct PseudoSample {
  std::vector<double> u;         // Rank(x_i)/n, midranks for ties
  std::vector<double> v;         // Rank(y_i)/n
  std::vector<double> w_sorted;  // ascending max(u_i, v_i)
  int n = 0;
};

namespace detail {
inline std::vector<double> midranks(std::span<const double> x) {
  const int n = int(x.size());
  std::vector<int> order(std::size_t(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return x[std::size_t(a)] < x[std::size_t(b)] ||
           (x[std::size_t(a)] == x[std::size_t(b)] && a < b);
  });
  std::vector<double> rank(std::size_t(n));
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && x[std::size_t(order[std::size_t(j + 1)])] ==
                            x[std::size_t(order[std::size_t(i)])])
      ++j;
    const double r = 0.5 * double(i + j) + 1.0;  // average of ranks i+1..j+1
    for (int t = i; t <= j; ++t) rank[std::size_t(order[std::size_t(t)])] = r;
    i = j + 1;
  }
  for (double& r : rank) r /= n;
  return rank;
}
}  // namespace detail

inline PseudoSample rank_transform(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y lengths differ");
  if (x.size() < 2) throw std::invalid_argument("need at least two observations");
  for (double t : x)
    if (std::isnan(t)) throw std::invalid_argument("NaN in data");
  for (double t : y)
    if (std::isnan(t)) throw std::invalid_argument("NaN in data");
  PseudoSample ps;
  ps.n = int(x.size());
  ps.u = detail::midranks(x);
  ps.v = detail::midranks(y);
  ps.w_sorted.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    ps.w_sorted[i] = std::max(ps.u[i], ps.v[i]);
  std::sort(ps.w_sorted.begin(), ps.w_sorted.end());
  return ps;
}

struct FitProblem {
  Eigen::MatrixXd values;        // n x m, e_k at the order statistics
  Eigen::MatrixXd slopes;        // n x m, e'_k at the order statistics
  Eigen::VectorXd target;        // b_i = sqrt(max(0, i/(n+1) - w_(i)^2))
  Eigen::MatrixXd guard_values;  // dyadic-grid positivity rows (may be empty)
  Eigen::MatrixXd guard_slopes;  // dyadic-grid slope rows (may be empty)
  BasisSet basis;
};

inline FitProblem build_problem(const PseudoSample& ps, const BasisSet& basis,
                                bool with_guards = true) {
  if (basis.size() == 0) throw std::invalid_argument("empty basis");
  const long n = ps.n;
  const long m = long(basis.size());
  FitProblem prob;
  prob.basis = basis;
  prob.values.resize(n, m);
  prob.slopes.resize(n, m);
  prob.target.resize(n);
  for (long i = 0; i < n; ++i) {
    const double w = ps.w_sorted[std::size_t(i)];
    for (long k = 0; k < m; ++k) {
      prob.values(i, k) = basis_eval(basis.indices[std::size_t(k)], w);
      prob.slopes(i, k) = basis_deriv(basis.indices[std::size_t(k)], w);
    }
    prob.target[i] = std::sqrt(std::max(0.0, double(i + 1) / double(n + 1) - w * w));
  }
  if (with_guards) {
    const int cells = 1 << (basis.max_scale + 1);
    prob.guard_values.resize(cells + 1, m);
    prob.guard_slopes.resize(cells + 1, m);
    for (int j = 0; j <= cells; ++j) {
      const double x = double(j) / cells;
      for (long k = 0; k < m; ++k) {
        prob.guard_values(j, k) = basis_eval(basis.indices[std::size_t(k)], x);
        prob.guard_slopes(j, k) = basis_deriv(basis.indices[std::size_t(k)], x);
      }
    }
  } else {
    prob.guard_values.resize(0, m);
    prob.guard_slopes.resize(0, m);
  }
  return prob;
}

struct FitResult {
  std::vector<double> coeffs;
  std::vector<int> active_value_floor;  // data rows with psi_hat(w_(i)) = 0
  std::vector<int> active_slope_low;    // data rows with slope at -1
  std::vector<int> active_slope_high;   // data rows with slope at +1
  int active_guards = 0;                // binding guard rows
  double kkt_residual = 0.0;
  double objective = 0.0;
  int nnz = 0;
  int iterations = 0;
};

inline FitResult solve_qp(const FitProblem& prob, double kkt_tol = 1e-8,
                          double ridge = 1e-10) {
  if (ridge < 0.0 || !(kkt_tol > 0.0))
    throw std::invalid_argument("bad solver tolerances");
  const long n = prob.values.rows();
  const long m = prob.values.cols();
  const long g = prob.guard_values.rows();

  Eigen::MatrixXd H = 2.0 * (prob.values.transpose() * prob.values);
  H.diagonal().array() += 2.0 * ridge;
  const Eigen::VectorXd q = -2.0 * (prob.values.transpose() * prob.target);

  const long nc = 3 * n + 3 * g;
  Eigen::MatrixXd C(nc, m);
  Eigen::VectorXd d(nc);
  C.topRows(n) = prob.values;
  d.head(n).setZero();
  C.middleRows(n, n) = prob.slopes;
  d.segment(n, n).setConstant(-1.0);
  C.middleRows(2 * n, n) = -prob.slopes;
  d.segment(2 * n, n).setConstant(-1.0);
  if (g > 0) {
    C.middleRows(3 * n, g) = prob.guard_values;
    d.segment(3 * n, g).setZero();
    C.middleRows(3 * n + g, g) = prob.guard_slopes;
    d.segment(3 * n + g, g).setConstant(-1.0);
    C.bottomRows(g) = -prob.guard_slopes;
    d.tail(g).setConstant(-1.0);
  }

  QpOptions opt;
  opt.kkt_tol = kkt_tol;
  const QpResult qp = solve_qp_active_set(H, q, C, d, opt);

  FitResult res;
  res.coeffs.assign(qp.x.data(), qp.x.data() + m);
  for (int j : qp.active) {
    if (j < n)
      res.active_value_floor.push_back(j);
    else if (j < 2 * n)
      res.active_slope_low.push_back(j - int(n));
    else if (j < 3 * n)
      res.active_slope_high.push_back(j - int(2 * n));
    else
      ++res.active_guards;
  }
  res.kkt_residual = qp.kkt_residual;
  res.objective = (prob.values * qp.x - prob.target).squaredNorm() +
                  ridge * qp.x.squaredNorm();
  res.nnz = int(std::count_if(res.coeffs.begin(), res.coeffs.end(),
                              [](double a) { return std::abs(a) > 1e-10; }));
  res.iterations = qp.iterations;
  return res;
}

struct FitOptions {
  double kkt_tol = 1e-8;
  double ridge = 1e-10;
  bool guards = true;
};

inline std::pair<Generator, FitResult> fit_from_pseudo(const PseudoSample& ps,
                                                       const BasisSet& basis,
                                                       const FitOptions& opt = {}) {
  const FitProblem prob = build_problem(ps, basis, opt.guards);
  FitResult fit = solve_qp(prob, opt.kkt_tol, opt.ridge);
  Generator gen = Generator::fitted(basis, fit.coeffs);
  return {std::move(gen), std::move(fit)};
}

inline std::pair<Generator, FitResult> fit_generator(std::span<const double> x,
                                                     std::span<const double> y,
                                                     const BasisSet& basis,
                                                     const FitOptions& opt = {}) {
  return fit_from_pseudo(rank_transform(x, y), basis, opt);
}

// ---- coefficient file ------------------------------------------------
//
// Line-oriented text: header "# smax=<int> n=<int>", then one line per
// nonzero coefficient "scale <tab> loc <tab> value" with 17 significant
// digits (round-trips doubles exactly).

inline void write_coeffs(std::ostream& os, const BasisSet& basis,
                         const std::vector<double>& coeffs, int sample_n) {
  if (basis.size() != coeffs.size())
    throw std::invalid_argument("coefficient count does not match basis size");
  os << "# smax=" << basis.max_scale << " n=" << sample_n << "\n";
  char buf[64];
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) <= 1e-10) continue;
    std::snprintf(buf, sizeof buf, "%.17g", coeffs[i]);
    os << basis.indices[i].scale << '\t' << basis.indices[i].loc << '\t' << buf << "\n";
  }
}

struct LoadedCoeffs {
  BasisSet basis;
  std::vector<double> coeffs;
  int sample_n = 0;
};

inline LoadedCoeffs read_coeffs(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty coefficient file");
  int smax = -1, sample_n = -1;
  if (std::sscanf(line.c_str(), "# smax=%d n=%d", &smax, &sample_n) != 2)
    throw std::runtime_error("bad coefficient file header: " + line);
  LoadedCoeffs out;
  out.basis = BasisSet::up_to_scale(smax);
  out.sample_n = sample_n;
  out.coeffs.assign(out.basis.size(), 0.0);
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    int s = 0, l = 0;
    double a = 0.0;
    if (std::sscanf(line.c_str(), "%d\t%d\t%lf", &s, &l, &a) != 3)
      throw std::runtime_error("bad coefficient line " + std::to_string(lineno));
    const BasisIndex idx{s, l};
    if (!basis_index_valid(idx) || s > smax)
      throw std::runtime_error("coefficient index out of range on line " +
                               std::to_string(lineno));
    const auto pos = std::lower_bound(
        out.basis.indices.begin(), out.basis.indices.end(), idx,
        [](const BasisIndex& a_, const BasisIndex& b_) {
          return a_.scale < b_.scale || (a_.scale == b_.scale && a_.loc < b_.loc);
        });
    out.coeffs[std::size_t(pos - out.basis.indices.begin())] = a;
  }
  return out;
}

inline void write_coeffs_file(const std::string& path, const BasisSet& basis,
                              const std::vector<double>& coeffs, int sample_n) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_coeffs(os, basis, coeffs, sample_n);
}

inline LoadedCoeffs read_coeffs_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_coeffs(is);
}

}  // namespace semicop
