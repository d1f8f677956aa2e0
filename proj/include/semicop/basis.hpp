// Dyadic sine basis on [0,1]: half-sine bumps indexed by a scale and a
// location, e(x) = sin(pi/2 (2^(s+1) x - l)) on the support
// [l 2^-(s+1), (l+2) 2^-(s+1)], zero outside.  Every member vanishes at
// 0 and 1, which keeps fitted generating functions pinned to zero at the
// endpoints.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace semicop {

struct BasisIndex {
  int scale = 0;  // s >= 0
  int loc = 0;    // 0 <= loc <= 2 (2^s - 1)

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

inline bool basis_index_valid(const BasisIndex& idx) {
  if (idx.scale < 0 || idx.scale > 30) return false;
  return idx.loc >= 0 && idx.loc <= 2 * ((1 << idx.scale) - 1);
}

namespace detail {
inline void require_basis_index(const BasisIndex& idx) {
  if (!basis_index_valid(idx))
    throw std::invalid_argument("invalid basis index (" + std::to_string(idx.scale) +
                                "," + std::to_string(idx.loc) + ")");
}
inline void require_unit(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error(std::string(what) + " outside [0,1]");
}
}  // namespace detail

/// Value of the basis function at x in [0,1]; zero outside its support.
inline double basis_eval(const BasisIndex& idx, double x) {
  detail::require_basis_index(idx);
  detail::require_unit(x, "basis argument");
  const double t = std::ldexp(x, idx.scale + 1) - idx.loc;
  if (t < 0.0 || t > 2.0) return 0.0;
  return std::sin(std::numbers::pi / 2.0 * t);
}

/// Derivative at x; one-sided (from inside the support) at the support
/// endpoints, zero outside.
inline double basis_deriv(const BasisIndex& idx, double x) {
  detail::require_basis_index(idx);
  detail::require_unit(x, "basis argument");
  const double t = std::ldexp(x, idx.scale + 1) - idx.loc;
  if (t < 0.0 || t > 2.0) return 0.0;
  return std::ldexp(std::numbers::pi, idx.scale) * std::cos(std::numbers::pi / 2.0 * t);
}

/// Integral over [0,1], in closed form: 2^(1-s)/pi regardless of location.
inline double basis_integral(const BasisIndex& idx) {
  detail::require_basis_index(idx);
  return std::ldexp(1.0, 1 - idx.scale) / std::numbers::pi;
}

// All indices with scale <= max_scale, ordered by (scale, loc).  The fixed
// ordering pins the column order of fit matrices, so fits are reproducible
// bit for bit.
struct BasisSet {
  int max_scale = 0;
  std::vector<BasisIndex> indices;

  static BasisSet up_to_scale(int max_scale) {
    if (max_scale < 0 || max_scale > 20)
      throw std::invalid_argument("max_scale out of range");
    BasisSet set;
    set.max_scale = max_scale;
    for (int s = 0; s <= max_scale; ++s)
      for (int l = 0; l <= 2 * ((1 << s) - 1); ++l)
        set.indices.push_back({s, l});
    return set;
  }

  std::size_t size() const { return indices.size(); }
};

}  // namespace semicop
