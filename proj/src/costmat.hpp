#pragma once

#include "types.hpp"

namespace csaf {

/// Recipe for building a cost matrix from a severity ordering: diagonal costs
/// grow with decreasing severity, off-diagonals are squared diagonal ratios
/// min-max scaled into [offdiag_scale_min, offdiag_scale_max].
struct CostMatrixSpec {
  ClassSchema schema;
  std::vector<double> diagonal_base;  // indexed by severity rank; empty = rank + 1
  double offdiag_scale_min = 16.0;
  double offdiag_scale_max = 200.0;
  bool round_offdiagonals = true;

  static CostMatrixSpec defaults(ClassSchema schema);
  void validate() const;
};

// Diagonal cost per class index: the class at severity rank r gets
// diagonal_base[r].
std::vector<double> diagonal_costs(const CostMatrixSpec& spec);

// (c_jj / c_ii)^2 for one off-diagonal cell.
double raw_offdiagonal(double c_ii, double c_jj);

// Min-max scales every off-diagonal cell of the row-major m x m buffer into
// [lo, hi], optionally rounding half away from zero to integers. The diagonal
// is left untouched. Returns true when all off-diagonals were equal and the
// scaling degenerated to lo everywhere.
bool scale_offdiagonals(std::size_t classes, std::vector<double>& cells,
                        double lo, double hi, bool round_to_integers);

// Full construction: diagonal, raw off-diagonals, scaling. If
// degenerate_scaling is non-null it reports whether the off-diagonal scaling
// collapsed (all raw values equal).
CostMatrix build_cost_matrix(const CostMatrixSpec& spec,
                             bool* degenerate_scaling = nullptr);

// All-ones matrix: the multiplicative identity for cost adjustment.
CostMatrix uniform_cost_matrix(std::size_t classes);

}  // namespace csaf
