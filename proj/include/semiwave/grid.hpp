#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "semiwave/params.hpp"

namespace semiwave {

using Array = Eigen::ArrayXd;

// Uniform 1-D mesh.  The delay shift c*h must land on a whole number of cells
// so the retarded term reads stored samples directly; make_grid snaps dz.
struct Grid {
  double z_min = 0.0;
  int n = 0;
  double dz = 0.0;

  double z_max() const { return z_min + (n - 1) * dz; }
  double z(int i) const { return z_min + i * dz; }
  Array zs() const { return z_min + dz * Array::LinSpaced(n, 0.0, n - 1.0); }

  // cells spanned by the delay shift; 0 when h = 0
  int shift_cells(const Params& p) const {
    return static_cast<int>(std::llround(p.ch() / dz));
  }
};

inline void validate_grid(const Grid& g, const Params& p) {
  if (g.n < 16) throw invalid_config_error("grid: need n >= 16");
  if (!(g.dz > 0.0)) throw invalid_config_error("grid: dz must be positive");
  if (p.h > 0.0) {
    const double cells = p.ch() / g.dz;
    if (std::abs(cells - std::llround(cells)) > 1e-9 * std::max(1.0, cells))
      throw invalid_config_error("grid: c*h must be an integer number of cells");
  }
}

// Grid on [z_min, z_min + length] with dz snapped so that c*h is a whole
// number of cells (h > 0) and length a whole number of cells.
inline Grid make_grid(const Params& p, double z_min, double length, double dz_request) {
  if (!(dz_request > 0.0) || !(length > 0.0))
    throw invalid_config_error("make_grid: need positive dz and length");
  double dz = dz_request;
  if (p.h > 0.0) {
    const int m = std::max(1, static_cast<int>(std::llround(p.ch() / dz_request)));
    dz = p.ch() / m;
  }
  const int span = std::max(15, static_cast<int>(std::ceil(length / dz - 1e-9)));
  Grid g{z_min, span + 1, dz};
  validate_grid(g, p);
  return g;
}

struct Field {
  Grid grid;
  Array values;

  Field() = default;
  Field(const Grid& g, Array v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
      throw invalid_config_error("field: sample count does not match grid");
  }
};

}  // namespace semiwave
