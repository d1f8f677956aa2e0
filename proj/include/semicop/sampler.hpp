// Simulation from C(u,v) = uv + psi(u) psi(v) by conditional inversion:
// draw independent uniforms (u, t) and solve t = d/du C(u, v) for v by
// bisection.  Each pair owns draws 2i and 2i+1 of one SplitMix64 sequence,
// so the output is independent of evaluation order and can be produced in
// parallel.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "semicop/generator.hpp"
#include "semicop/rng.hpp"

namespace semicop {

struct SampleConfig {
  long n = 0;
  std::uint64_t seed = 0;
  double bisect_tol = 1e-10;
  int max_iter = 200;

  void validate() const {
    if (n < 1) throw std::invalid_argument("sample size must be >= 1");
    if (!(bisect_tol > 0.0)) throw std::invalid_argument("bisect_tol must be positive");
    const int needed = int(std::ceil(std::log2(1.0 / bisect_tol)));
    if (max_iter < needed)
      throw std::invalid_argument("max_iter too small for bisect_tol");
  }
};

/// Solve t = v + psi'(u) psi(v) for v in [0,1] by bisection.
/// The conditional CDF is 0 at v=0 and 1 at v=1, so a root always brackets.
inline double invert_conditional(const Generator& g, double u, double t,
                                 const SampleConfig& cfg = {}) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("u must lie in (0,1)");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("t must lie in [0,1]");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double slope_u = g.slope(u);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = mid + slope_u * g.value(mid) - t;
    if (std::abs(f) <= cfg.bisect_tol) return mid;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
    if (mid == lo || mid == hi) {
      // Interval collapsed to adjacent doubles; accept the better endpoint.
      if (std::abs(f) <= 16.0 * cfg.bisect_tol) return mid;
      break;
    }
  }
  throw std::runtime_error("conditional inversion did not converge");
}

/// n pairs with joint CDF uv + psi(u) psi(v); deterministic for a given seed.
inline std::vector<std::pair<double, double>> sample_pairs(const Generator& g,
                                                           const SampleConfig& cfg) {
  cfg.validate();
  if (!g.differentiable())
    throw std::domain_error("cannot sample from a non-differentiable generator");
  std::vector<std::pair<double, double>> out;
  out.reserve(std::size_t(cfg.n));
  for (long i = 0; i < cfg.n; ++i) {
    SplitMix64 rng(cfg.seed);
    rng.skip(2 * std::uint64_t(i));
    const double u = rng.next_unit();
    const double t = rng.next_unit();
    out.emplace_back(u, invert_conditional(g, u, t, cfg));
  }
  return out;
}

}  // namespace semicop
