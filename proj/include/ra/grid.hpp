#pragma once

#include <vector>

#include "ra/environment.hpp"
#include "ra/types.hpp"

namespace ra {

// Uniform cell-centered grid.  Flat indices are row-major with dimension 0
// slowest.  Periodic dimensions wrap when snapping.
struct Grid {
  Vec lower, upper;
  VecI counts;
  std::vector<bool> periodic;
  Vec pitch;

  int dims() const { return static_cast<int>(counts.size()); }
  long total_cells() const;

  long flat_index(const VecI& idx) const;
  VecI multi_index(long flat) const;
  Vec center(const VecI& idx) const;
  Vec center(long flat) const { return center(multi_index(flat)); }

  // Cell containing x (= nearest center).  Non-periodic coordinates outside
  // the bounds clamp to the boundary cell and set *out_of_domain.
  VecI nearest_cell(const Vec& x, bool* out_of_domain = nullptr) const;
  long nearest_flat(const Vec& x, bool* out_of_domain = nullptr) const;
};

Grid build_grid(Vec lower, Vec upper, VecI counts, std::vector<bool> periodic);
// Bounds and periodicity from the environment's declared domain.
Grid build_grid(const Environment& env, VecI counts);

// Scalar field on a grid.
struct ValueGrid {
  Grid grid;
  Eigen::ArrayXd values;

  // Nearest-cell lookup; out-of-domain points clamp.
  double at(const Vec& x) const;
  // Multilinear interpolation over the 2^d surrounding centers,
  // periodic-aware; clamps outside the center lattice.
  double interpolate(const Vec& x) const;
};

// Per-cell, per-action table (rows = cells, cols = actions).
struct QTable {
  Grid grid;
  Mat q;

  double greedy_value(long cell) const { return q.row(cell).minCoeff(); }
  int greedy_action(long cell) const;  // ties break to the lowest index
};

// Cells whose value certifies membership (zero sub-level set, closed).
MaskArray extract_ra_mask(const ValueGrid& vg);
MaskArray extract_ra_mask(const QTable& qt);

inline bool mask_subset(const MaskArray& a, const MaskArray& b) {
  return (!a || b).all();
}

}  // namespace ra
