#pragma once

#include <cmath>
#include <stdexcept>

namespace semicop {

/// Composite Simpson rule on [0,1].  `points` must be odd and >= 3.
template <typename F>
double simpson_unit(F&& f, int points = 2001) {
  if (points < 3 || points % 2 == 0)
    throw std::invalid_argument("simpson_unit: point count must be odd and >= 3");
  const int n = points - 1;  // even number of intervals
  const double h = 1.0 / n;
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
  return sum * h / 3.0;
}

}  // namespace semicop
