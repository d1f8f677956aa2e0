// Dense convex QP:  minimize 1/2 x'Hx + q'x  subject to  C x >= d,
// solved by a primal active-set method.
//
// H must be positive definite (the callers add a ridge when needed).  The
// method starts from a feasible point (the zero vector by default, after
// checking the unconstrained minimizer), treats the working set as
// equalities via a Schur complement on the LLT factor of H, drops the
// constraint with the most negative multiplier, and adds the first blocking
// constraint found by the ratio test.  All tie-breaking is by lowest
// constraint index, so results are reproducible bit for bit.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace semicop {

struct QpOptions {
  double kkt_tol = 1e-8;
  int max_iter = 0;  // 0: pick from problem size
};

struct QpResult {
  Eigen::VectorXd x;
  std::vector<int> active;         // working set at exit (row indices into C)
  Eigen::VectorXd multipliers;     // aligned with `active`, >= 0 at optimum
  double kkt_residual = 0.0;
  int iterations = 0;
};

class QpSolverError : public std::runtime_error {
 public:
  QpSolverError(const std::string& msg, QpResult best)
      : std::runtime_error(msg), best_iterate(std::move(best)) {}
  QpResult best_iterate;
};

namespace detail {

inline double qp_kkt_residual(const Eigen::MatrixXd& H, const Eigen::VectorXd& q,
                              const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                              const QpResult& r) {
  Eigen::VectorXd grad = H * r.x + q;
  double comp = 0.0, dual = 0.0;
  for (std::size_t i = 0; i < r.active.size(); ++i) {
    const int j = r.active[i];
    const double lam = r.multipliers[long(i)];
    grad -= lam * C.row(j).transpose();
    comp = std::max(comp, std::abs(lam * (C.row(j).dot(r.x) - d[j])));
    dual = std::max(dual, -lam);
  }
  double feas = 0.0;
  if (C.rows() > 0) feas = std::max(0.0, (d - C * r.x).maxCoeff());
  return std::max({grad.cwiseAbs().maxCoeff(), comp, dual, feas});
}

}  // namespace detail

inline QpResult solve_qp_active_set(const Eigen::MatrixXd& H, const Eigen::VectorXd& q,
                                    const Eigen::MatrixXd& C, const Eigen::VectorXd& d,
                                    const QpOptions& opt = {}) {
  const long m = H.rows();
  const long nc = C.rows();
  if (H.cols() != m || q.size() != m || (nc > 0 && C.cols() != m) || d.size() != nc)
    throw std::invalid_argument("inconsistent QP dimensions");

  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("QP Hessian is not positive definite");

  QpResult res;
  res.x = llt.solve(-q);
  if (nc == 0 || (C * res.x - d).minCoeff() >= -1e-12) {
    res.kkt_residual = detail::qp_kkt_residual(H, q, C, d, res);
    return res;
  }

  // The zero vector must be feasible (true for every problem in this
  // library: all right-hand sides are <= 0).
  res.x.setZero();
  if (d.maxCoeff() > 0.0)
    throw std::invalid_argument("QP start point is infeasible");

  std::vector<int> work;          // sorted working set
  std::vector<char> in_work(std::size_t(nc), 0);
  Eigen::VectorXd mult;           // multipliers of the working set (sign: lambda)

  const int max_iter = opt.max_iter > 0 ? opt.max_iter
                                        : int(200 + 10 * (nc + m));
  for (int iter = 1; iter <= max_iter; ++iter) {
    res.iterations = iter;
    const Eigen::VectorXd grad = H * res.x + q;
    const Eigen::VectorXd hinv_grad = llt.solve(grad);

    Eigen::VectorXd step;
    mult.resize(long(work.size()));
    if (work.empty()) {
      step = -hinv_grad;
    } else {
      const long w = long(work.size());
      Eigen::MatrixXd Cw(w, m);
      for (long i = 0; i < w; ++i) Cw.row(i) = C.row(work[std::size_t(i)]);
      const Eigen::MatrixXd Y = llt.solve(Cw.transpose());  // H^-1 Cw'
      const Eigen::MatrixXd S = Cw * Y;
      const Eigen::VectorXd rhs = -(Cw * hinv_grad);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
      Eigen::VectorXd mu;
      if (ldlt.info() == Eigen::Success) {
        mu = ldlt.solve(rhs);
      } else {
        mu = S.completeOrthogonalDecomposition().solve(rhs);
      }
      step = -hinv_grad - Y * mu;
      mult = -mu;
    }

    if (step.cwiseAbs().maxCoeff() <= 1e-11 * (1.0 + res.x.cwiseAbs().maxCoeff())) {
      if (work.empty()) break;  // unconstrained stationary point
      long drop_pos = -1;
      double most_negative = -1e-10;
      for (long i = 0; i < mult.size(); ++i)
        if (mult[i] < most_negative) { most_negative = mult[i]; drop_pos = i; }
      if (drop_pos < 0) break;  // all multipliers nonnegative: optimal
      in_work[std::size_t(work[std::size_t(drop_pos)])] = 0;
      work.erase(work.begin() + drop_pos);
      continue;
    }

    // Ratio test over inactive constraints along `step`.
    double alpha = 1.0;
    int blocking = -1;
    const Eigen::VectorXd cstep = C * step;
    for (int j = 0; j < nc; ++j) {
      if (in_work[std::size_t(j)] || cstep[j] >= -1e-13) continue;
      const double slack = C.row(j).dot(res.x) - d[j];
      const double a_j = std::max(0.0, slack / -cstep[j]);
      if (a_j < alpha) { alpha = a_j; blocking = j; }
    }
    res.x += alpha * step;
    if (blocking >= 0) {
      in_work[std::size_t(blocking)] = 1;
      work.insert(std::upper_bound(work.begin(), work.end(), blocking), blocking);
    }
  }

  res.active = work;
  res.multipliers = mult.size() == long(work.size()) ? mult
                                                     : Eigen::VectorXd::Zero(long(work.size()));
  res.kkt_residual = detail::qp_kkt_residual(H, q, C, d, res);
  if (res.kkt_residual > opt.kkt_tol) {
    throw QpSolverError("active-set QP did not reach the requested KKT tolerance (residual " +
                            std::to_string(res.kkt_residual) + ")",
                        res);
  }
  return res;
}

}  // namespace semicop
