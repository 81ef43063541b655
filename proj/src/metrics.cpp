#include "metrics.hpp"

namespace csaf {

ConfusionMatrix confusion_matrix(std::span<const std::size_t> predicted,
                                 std::span<const std::size_t> truth,
                                 std::size_t classes) {
  if (predicted.size() != truth.size())
    fail(errc::dimension_mismatch, "predicted and truth lengths differ");
  ConfusionMatrix cm = ConfusionMatrix::zeros(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= classes || predicted[i] >= classes)
      fail(errc::validation, "class index out of range at sample " + std::to_string(i));
    cm.at(truth[i], predicted[i]) += 1.0;
  }
  return cm;
}

ConfusionMatrix cost_adjust(const ConfusionMatrix& cm, const CostMatrix& cost) {
  if (cm.classes != cost.classes)
    fail(errc::dimension_mismatch, "confusion and cost matrices disagree on class count");
  ConfusionMatrix out = cm;
  for (std::size_t i = 0; i < out.cells.size(); ++i) out.cells[i] *= cost.cells[i];
  return out;
}

double micro_f1(const ConfusionMatrix& cm) {
  const double total = cm.total();
  if (total <= 0.0) fail(errc::validation, "micro F1 of an empty confusion matrix");
  const double tp = cm.trace();
  const double fp = total - tp;  // every off-diagonal cell is one FP and one FN
  const double fn = fp;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

double accuracy(const ConfusionMatrix& cm) {
  const double total = cm.total();
  if (total <= 0.0) fail(errc::validation, "accuracy of an empty confusion matrix");
  return cm.trace() / total;
}

double total_cost(const ConfusionMatrix& cm, const CostMatrix& cost) {
  if (cm.classes != cost.classes)
    fail(errc::dimension_mismatch, "confusion and cost matrices disagree on class count");
  double sum = 0.0;
  for (std::size_t i = 0; i < cm.cells.size(); ++i) sum += cm.cells[i] * cost.cells[i];
  return sum;
}

std::optional<double> sensitivity(const ConfusionMatrix& cm, std::size_t cls) {
  if (cls >= cm.classes) fail(errc::invalid_argument, "class index out of range");
  const double row = cm.row_sum(cls);
  if (row <= 0.0) return std::nullopt;
  return cm.at(cls, cls) / row;
}

std::optional<double> specificity(const ConfusionMatrix& cm, std::size_t cls) {
  if (cls >= cm.classes) fail(errc::invalid_argument, "class index out of range");
  const double negatives = cm.total() - cm.row_sum(cls);
  if (negatives <= 0.0) return std::nullopt;
  const double fp = cm.col_sum(cls) - cm.at(cls, cls);
  const double tn = negatives - fp;
  return tn / (tn + fp);
}

std::vector<ConfusionMatrix> validation_confusions(const PredictionSet& split) {
  if (!split.labels) fail(errc::validation, "validation split has no labels");
  std::vector<ConfusionMatrix> out;
  out.reserve(split.classifier_count());
  for (std::size_t c = 0; c < split.classifier_count(); ++c) {
    ConfusionMatrix cm = ConfusionMatrix::zeros(split.classes);
    for (std::size_t s = 0; s < split.sample_count(); ++s)
      cm.at((*split.labels)[s], argmax_index(split.decision(c, s))) += 1.0;
    out.push_back(std::move(cm));
  }
  return out;
}

}  // namespace csaf
