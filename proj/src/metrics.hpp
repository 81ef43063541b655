#pragma once

#include "types.hpp"

namespace csaf {

// cell[p][q] = number of samples with true class p predicted as q.
ConfusionMatrix confusion_matrix(std::span<const std::size_t> predicted,
                                 std::span<const std::size_t> truth,
                                 std::size_t classes);

// Element-wise product with a cost matrix (the cost-sensitive confusion
// matrix used for objective weights).
ConfusionMatrix cost_adjust(const ConfusionMatrix& cm, const CostMatrix& cost);

// Micro-averaged F1 via TP/FP/FN aggregation, 2TP / (2TP + FP + FN).
// Weighted cells are treated as fractional counts.
double micro_f1(const ConfusionMatrix& cm);

double accuracy(const ConfusionMatrix& cm);

// Sum of the item-wise product between confusion and cost matrices.
double total_cost(const ConfusionMatrix& cm, const CostMatrix& cost);

// TP / (TP + FN) for one class; absent when the class has no samples.
std::optional<double> sensitivity(const ConfusionMatrix& cm, std::size_t cls);

// TN / (TN + FP) for one class; absent when every sample belongs to it.
std::optional<double> specificity(const ConfusionMatrix& cm, std::size_t cls);

// Per-classifier argmax confusion matrices on a labeled split (the
// reliability matrices behind the objective weights).
std::vector<ConfusionMatrix> validation_confusions(const PredictionSet& split);

}  // namespace csaf
