#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

namespace csaf {

void fail(errc code, const std::string& message) { throw Error(code, message); }

ClassSchema ClassSchema::create(std::vector<std::string> names,
                                const std::vector<std::string>& severity_order) {
  if (names.size() < 2) fail(errc::validation, "class schema needs at least 2 classes");
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) fail(errc::validation, "empty class name");
    if (!seen.insert(n).second) fail(errc::validation, "duplicate class name: " + n);
  }

  ClassSchema schema;
  schema.names = std::move(names);
  const std::size_t m = schema.names.size();
  schema.severity_rank.assign(m, 0);
  if (severity_order.empty()) {
    for (std::size_t i = 0; i < m; ++i) schema.severity_rank[i] = i;
    return schema;
  }

  if (severity_order.size() != m)
    fail(errc::validation, "severity list must rank every class exactly once");
  std::vector<bool> ranked(m, false);
  for (std::size_t rank = 0; rank < m; ++rank) {
    auto idx = schema.find(severity_order[rank]);
    if (!idx)
      fail(errc::validation, "severity list names unknown class: " + severity_order[rank]);
    if (ranked[*idx])
      fail(errc::validation, "severity list repeats class: " + severity_order[rank]);
    ranked[*idx] = true;
    schema.severity_rank[*idx] = rank;
  }
  return schema;
}

std::optional<std::size_t> ClassSchema::find(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

std::vector<std::size_t> ClassSchema::classes_by_severity() const {
  std::vector<std::size_t> order(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) order[severity_rank[i]] = i;
  return order;
}

ClassSchema ClassSchema::reversed_severity() const {
  ClassSchema out = *this;
  const std::size_t m = names.size();
  for (std::size_t i = 0; i < m; ++i) out.severity_rank[i] = m - 1 - severity_rank[i];
  return out;
}

std::optional<std::string> validate_decision_vector(std::span<const double> v,
                                                    double tolerance) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "entry " << i << " out of [0,1]: " << v[i];
      return msg.str();
    }
    sum += v[i];
  }
  if (std::abs(sum - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "entries sum to " << sum << " (tolerance " << tolerance << ")";
    return msg.str();
  }
  return std::nullopt;
}

DecisionVector renormalize(std::span<const double> v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0.0) fail(errc::validation, "renormalize: negative entry at index " + std::to_string(i));
    sum += v[i];
  }
  if (sum <= 0.0) fail(errc::validation, "renormalize: entries sum to zero");
  DecisionVector out(v.begin(), v.end());
  for (double& x : out) x /= sum;
  return out;
}

std::size_t argmax_index(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

DecisionMatrix DecisionMatrix::create(std::size_t classifiers, std::size_t classes) {
  if (classifiers == 0) fail(errc::validation, "decision matrix needs at least one classifier");
  if (classes < 2) fail(errc::validation, "decision matrix needs at least two classes");
  DecisionMatrix dm;
  dm.classifiers = classifiers;
  dm.classes = classes;
  dm.values.assign(classifiers * classes, 0.0);
  return dm;
}

DecisionMatrix DecisionMatrix::from_rows(const std::vector<DecisionVector>& rows) {
  if (rows.empty()) fail(errc::validation, "decision matrix needs at least one classifier");
  DecisionMatrix dm = create(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dm.classes)
      fail(errc::dimension_mismatch, "decision matrix rows disagree on class count");
    std::copy(rows[i].begin(), rows[i].end(), dm.row(i).begin());
  }
  return dm;
}

CostMatrix CostMatrix::create(std::size_t classes, std::vector<double> cells) {
  if (classes < 2) fail(errc::validation, "cost matrix needs at least two classes");
  if (cells.size() != classes * classes)
    fail(errc::dimension_mismatch, "cost matrix cell count does not match class count");
  for (std::size_t p = 0; p < classes; ++p) {
    const double diag = cells[p * classes + p];
    for (std::size_t q = 0; q < classes; ++q) {
      const double c = cells[p * classes + q];
      if (!(c > 0.0) || !std::isfinite(c))
        fail(errc::validation, "cost matrix entries must be positive and finite");
      if (q != p && diag > c)
        fail(errc::validation,
             "cost of a correct prediction exceeds a misclassification cost in row " +
                 std::to_string(p));
    }
  }
  CostMatrix cm;
  cm.classes = classes;
  cm.cells = std::move(cells);
  return cm;
}

ConfusionMatrix ConfusionMatrix::zeros(std::size_t classes) {
  if (classes < 2) fail(errc::validation, "confusion matrix needs at least two classes");
  ConfusionMatrix cm;
  cm.classes = classes;
  cm.cells.assign(classes * classes, 0.0);
  return cm;
}

ConfusionMatrix ConfusionMatrix::create(std::size_t classes, std::vector<double> cells) {
  if (cells.size() != classes * classes)
    fail(errc::dimension_mismatch, "confusion matrix cell count does not match class count");
  for (double c : cells)
    if (c < 0.0 || !std::isfinite(c))
      fail(errc::validation, "confusion matrix cells must be non-negative and finite");
  ConfusionMatrix cm = zeros(classes);
  cm.cells = std::move(cells);
  return cm;
}

double ConfusionMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < classes; ++i) t += at(i, i);
  return t;
}

double ConfusionMatrix::total() const {
  double t = 0.0;
  for (double c : cells) t += c;
  return t;
}

double ConfusionMatrix::row_sum(std::size_t p) const {
  double t = 0.0;
  for (std::size_t q = 0; q < classes; ++q) t += at(p, q);
  return t;
}

double ConfusionMatrix::col_sum(std::size_t q) const {
  double t = 0.0;
  for (std::size_t p = 0; p < classes; ++p) t += at(p, q);
  return t;
}

DecisionMatrix PredictionSet::decision_matrix(std::size_t sample) const {
  DecisionMatrix dm = DecisionMatrix::create(classifier_count(), classes);
  for (std::size_t i = 0; i < classifier_count(); ++i) {
    auto src = decision(i, sample);
    std::copy(src.begin(), src.end(), dm.row(i).begin());
  }
  return dm;
}

void PredictionSet::gather(std::span<const std::size_t> classifier_subset,
                           std::size_t sample, DecisionMatrix& out) const {
  out.classifiers = classifier_subset.size();
  out.classes = classes;
  out.values.resize(out.classifiers * classes);
  for (std::size_t i = 0; i < classifier_subset.size(); ++i) {
    auto src = decision(classifier_subset[i], sample);
    std::copy(src.begin(), src.end(), out.values.begin() + i * classes);
  }
}

void PredictionSet::validate() const {
  if (classes < 2) fail(errc::validation, "prediction set needs at least two classes");
  const std::size_t n = sample_ids.size();
  for (const auto& block : predictions)
    if (block.size() != n * classes)
      fail(errc::dimension_mismatch, "classifier predictions do not cover every sample");
  if (labels) {
    if (labels->size() != n)
      fail(errc::dimension_mismatch, "label count does not match sample count");
    for (std::size_t v : *labels)
      if (v >= classes) fail(errc::validation, "label index out of range");
  }
}

}  // namespace csaf
