#include "costmat.hpp"

#include <algorithm>
#include <cmath>

namespace csaf {

CostMatrixSpec CostMatrixSpec::defaults(ClassSchema schema) {
  CostMatrixSpec spec;
  spec.schema = std::move(schema);
  spec.diagonal_base.resize(spec.schema.size());
  for (std::size_t r = 0; r < spec.diagonal_base.size(); ++r)
    spec.diagonal_base[r] = static_cast<double>(r + 1);
  return spec;
}

void CostMatrixSpec::validate() const {
  if (schema.size() < 2) fail(errc::validation, "cost matrix spec needs at least two classes");
  if (diagonal_base.size() != schema.size())
    fail(errc::dimension_mismatch, "diagonal base must supply one cost per severity rank");
  double max_base = 0.0;
  for (double b : diagonal_base) {
    if (!(b > 0.0) || !std::isfinite(b))
      fail(errc::validation, "diagonal base costs must be positive");
    max_base = std::max(max_base, b);
  }
  if (!(offdiag_scale_min < offdiag_scale_max))
    fail(errc::validation, "off-diagonal scale range must satisfy lo < hi");
  if (offdiag_scale_min < max_base)
    fail(errc::validation,
         "off-diagonal scale minimum must not undercut the largest diagonal cost");
}

std::vector<double> diagonal_costs(const CostMatrixSpec& spec) {
  spec.validate();
  std::vector<double> diag(spec.schema.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    diag[i] = spec.diagonal_base[spec.schema.severity_rank[i]];
  return diag;
}

double raw_offdiagonal(double c_ii, double c_jj) {
  if (!(c_ii > 0.0) || !(c_jj > 0.0))
    fail(errc::validation, "raw off-diagonal needs positive diagonal costs");
  const double ratio = c_jj / c_ii;
  return ratio * ratio;
}

namespace {

double round_half_away_from_zero(double v) {
  return v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5);
}

}  // namespace

bool scale_offdiagonals(std::size_t classes, std::vector<double>& cells,
                        double lo, double hi, bool round_to_integers) {
  if (!(lo < hi)) fail(errc::validation, "scale range must satisfy lo < hi");
  if (cells.size() != classes * classes)
    fail(errc::dimension_mismatch, "cell count does not match class count");

  double v_min = 0.0, v_max = 0.0;
  bool first = true;
  for (std::size_t p = 0; p < classes; ++p) {
    for (std::size_t q = 0; q < classes; ++q) {
      if (p == q) continue;
      const double v = cells[p * classes + q];
      if (first) {
        v_min = v_max = v;
        first = false;
      } else {
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
      }
    }
  }

  const bool degenerate = v_max == v_min;
  for (std::size_t p = 0; p < classes; ++p) {
    for (std::size_t q = 0; q < classes; ++q) {
      if (p == q) continue;
      double& v = cells[p * classes + q];
      v = degenerate ? lo : lo + (v - v_min) / (v_max - v_min) * (hi - lo);
      if (round_to_integers) v = round_half_away_from_zero(v);
    }
  }
  return degenerate;
}

CostMatrix build_cost_matrix(const CostMatrixSpec& spec, bool* degenerate_scaling) {
  const std::vector<double> diag = diagonal_costs(spec);
  const std::size_t m = spec.schema.size();

  std::vector<double> cells(m * m, 0.0);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q)
      cells[p * m + q] = p == q ? diag[p] : raw_offdiagonal(diag[p], diag[q]);
  }
  const bool degenerate = scale_offdiagonals(m, cells, spec.offdiag_scale_min,
                                             spec.offdiag_scale_max,
                                             spec.round_offdiagonals);
  if (degenerate_scaling) *degenerate_scaling = degenerate;
  return CostMatrix::create(m, std::move(cells));
}

CostMatrix uniform_cost_matrix(std::size_t classes) {
  if (classes < 2) fail(errc::validation, "cost matrix needs at least two classes");
  return CostMatrix::create(classes, std::vector<double>(classes * classes, 1.0));
}

}  // namespace csaf
