#pragma once

// Cubic (4-point Lagrange) sampling of gridded values at off-node points.
// Near the edges the stencil is shifted inward, so accuracy degrades to the
// available one-sided stencil instead of extrapolating.

#include <algorithm>
#include <cmath>

#include "semiwave/grid.hpp"

namespace semiwave {

inline double sample_cubic(const Grid& g, const Array& v, double z) {
  const double s = (z - g.z_min) / g.dz;
  int i1 = static_cast<int>(std::floor(s));   // left node of the bracketing cell
  int i0 = std::clamp(i1 - 1, 0, g.n - 4);    // stencil start
  const double t0 = s - i0;

  const double x0 = 0.0, x1 = 1.0, x2 = 2.0, x3 = 3.0;
  const double y0 = v[i0], y1 = v[i0 + 1], y2 = v[i0 + 2], y3 = v[i0 + 3];
  const double l0 = (t0 - x1) * (t0 - x2) * (t0 - x3) / ((x0 - x1) * (x0 - x2) * (x0 - x3));
  const double l1 = (t0 - x0) * (t0 - x2) * (t0 - x3) / ((x1 - x0) * (x1 - x2) * (x1 - x3));
  const double l2 = (t0 - x0) * (t0 - x1) * (t0 - x3) / ((x2 - x0) * (x2 - x1) * (x2 - x3));
  const double l3 = (t0 - x0) * (t0 - x1) * (t0 - x2) / ((x3 - x0) * (x3 - x1) * (x3 - x2));
  return y0 * l0 + y1 * l1 + y2 * l2 + y3 * l3;
}

inline double sample_cubic(const Field& f, double z) { return sample_cubic(f.grid, f.values, z); }

}  // namespace semiwave
