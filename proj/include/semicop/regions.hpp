// High-probability regions of the copula on an N x N grid.
//
// Cell (k,l), 0-based here, is the square ((k)/N,(k+1)/N] x ((l)/N,(l+1)/N];
// its mass under the family is 1/N^2 + (psi(u_k+1)-psi(u_k))(psi(v_l+1)-psi(v_l)).
// A minimum-area region of mass >= alpha is found by sorting cells by
// probability (they all have equal area, so the greedy prefix is exact).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "semicop/fitter.hpp"
#include "semicop/generator.hpp"

namespace semicop {

enum class CellSource { sp, np, exact };

struct CellProbabilities {
  int n_grid = 0;
  std::vector<double> p;  // row-major: p[k * n_grid + l]
  CellSource source = CellSource::exact;

  double cell(int k, int l) const { return p[std::size_t(k) * std::size_t(n_grid) + std::size_t(l)]; }
  double total() const { return std::accumulate(p.begin(), p.end(), 0.0); }
};

namespace detail {
inline CellProbabilities rectangle_masses(const Generator& g, int n_grid, CellSource src) {
  if (n_grid < 1) throw std::invalid_argument("grid size must be >= 1");
  std::vector<double> psi(std::size_t(n_grid) + 1);
  for (int i = 0; i <= n_grid; ++i) psi[std::size_t(i)] = g.value(double(i) / n_grid);
  CellProbabilities cp;
  cp.n_grid = n_grid;
  cp.source = src;
  cp.p.resize(std::size_t(n_grid) * std::size_t(n_grid));
  const double uniform = 1.0 / (double(n_grid) * double(n_grid));
  for (int k = 0; k < n_grid; ++k) {
    const double du = psi[std::size_t(k) + 1] - psi[std::size_t(k)];
    for (int l = 0; l < n_grid; ++l)
      cp.p[std::size_t(k) * std::size_t(n_grid) + std::size_t(l)] =
          uniform + du * (psi[std::size_t(l) + 1] - psi[std::size_t(l)]);
  }
  return cp;
}
}  // namespace detail

/// Exact cell masses of the copula with generating function psi.
inline CellProbabilities cell_probs_true(const Generator& g, int n_grid) {
  return detail::rectangle_masses(g, n_grid, CellSource::exact);
}

/// Same rectangle formula with a fitted psi.  A fitted function may break
/// the Lipschitz bound between its knots and produce slightly negative
/// masses; those are clamped to zero and the array renormalized.
inline CellProbabilities cell_probs_sp(const Generator& fitted, int n_grid) {
  CellProbabilities cp = detail::rectangle_masses(fitted, n_grid, CellSource::sp);
  for (double& t : cp.p) t = std::max(t, 0.0);
  const double total = cp.total();
  for (double& t : cp.p) t /= total;
  return cp;
}

/// Empirical cell frequencies of the pseudo-sample.  Cells are left-open,
/// right-closed; a coordinate of exactly zero belongs to the first cell.
inline CellProbabilities cell_probs_np(const PseudoSample& ps, int n_grid) {
  if (n_grid < 1) throw std::invalid_argument("grid size must be >= 1");
  CellProbabilities cp;
  cp.n_grid = n_grid;
  cp.source = CellSource::np;
  cp.p.assign(std::size_t(n_grid) * std::size_t(n_grid), 0.0);
  const auto cell_of = [n_grid](double t) {
    int c = int(std::ceil(t * n_grid)) - 1;
    return std::clamp(c, 0, n_grid - 1);
  };
  for (int i = 0; i < ps.n; ++i) {
    const int k = cell_of(ps.u[std::size_t(i)]);
    const int l = cell_of(ps.v[std::size_t(i)]);
    cp.p[std::size_t(k) * std::size_t(n_grid) + std::size_t(l)] += 1.0;
  }
  for (double& t : cp.p) t /= ps.n;
  return cp;
}

struct RegionMask {
  int n_grid = 0;
  std::vector<std::uint8_t> delta;  // row-major like CellProbabilities
  double achieved_mass = 0.0;
  double area = 0.0;  // selected cells / N^2
  double alpha = 0.0;

  bool contains(int k, int l) const {
    return delta[std::size_t(k) * std::size_t(n_grid) + std::size_t(l)] != 0;
  }
  int selected() const {
    return int(std::count(delta.begin(), delta.end(), std::uint8_t(1)));
  }
};

/// Select the fewest (equal-area) cells whose mass reaches alpha, most
/// probable first; ties broken by ascending cell index for determinism.
inline RegionMask greedy_region(const CellProbabilities& cp, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0,1]");
  const std::size_t cells = cp.p.size();
  std::vector<std::uint32_t> order(cells);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return cp.p[a] > cp.p[b] || (cp.p[a] == cp.p[b] && a < b);
  });
  RegionMask mask;
  mask.n_grid = cp.n_grid;
  mask.alpha = alpha;
  mask.delta.assign(cells, 0);
  double mass = 0.0;
  std::size_t taken = 0;
  for (std::uint32_t idx : order) {
    mask.delta[idx] = 1;
    mass += cp.p[idx];
    ++taken;
    if (mass >= alpha) break;
  }
  if (mass < alpha)
    throw std::runtime_error("total cell mass is below the requested alpha");
  mask.achieved_mass = mass;
  mask.area = double(taken) / double(cells);
  return mask;
}

// ---- exports ----------------------------------------------------------

/// CSV of 0/1 cell flags, one row per l (descending), columns k ascending.
inline void write_mask_csv(const RegionMask& mask, std::ostream& os) {
  const int n = mask.n_grid;
  for (int l = n - 1; l >= 0; --l) {
    for (int k = 0; k < n; ++k) {
      if (k) os << ',';
      os << (mask.contains(k, l) ? '1' : '0');
    }
    os << '\n';
  }
}

/// Combined ASCII PGM of nested masks (same grid, ascending alpha): each
/// pixel takes the grey level of the smallest region containing it,
/// 255 * tier / L, and 255 (white) if in none.  With the standard three
/// levels this gives 0/85/170/255.
inline void write_masks_pgm(std::span<const RegionMask> masks, std::ostream& os) {
  if (masks.empty()) throw std::invalid_argument("no masks to render");
  const int n = masks.front().n_grid;
  std::vector<const RegionMask*> sorted;
  for (const RegionMask& m : masks) {
    if (m.n_grid != n) throw std::invalid_argument("mask grids differ");
    sorted.push_back(&m);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const RegionMask* a, const RegionMask* b) { return a->alpha < b->alpha; });
  const int levels = int(sorted.size());
  os << "P2\n" << n << ' ' << n << "\n255\n";
  for (int l = n - 1; l >= 0; --l) {
    for (int k = 0; k < n; ++k) {
      int tier = levels;
      for (int t = 0; t < levels; ++t)
        if (sorted[std::size_t(t)]->contains(k, l)) { tier = t; break; }
      const int grey = int(std::lround(255.0 * tier / levels));
      os << grey << (k + 1 < n ? ' ' : '\n');
    }
  }
}

inline void write_mask_csv_file(const RegionMask& mask, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_mask_csv(mask, os);
}

inline void write_masks_pgm_file(std::span<const RegionMask> masks, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_masks_pgm(masks, os);
}

}  // namespace semicop
