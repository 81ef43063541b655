#pragma once

#include "types.hpp"

namespace csaf {

// Keeps objective weights inside (0, 1] even when the weighted micro F1 is 0.
inline constexpr double kObjectiveWeightFloor = 1e-6;

// Two per-sample individualities closer than this are treated as equal by the
// subjective min-max normalization.
inline constexpr double kIndividualitySpread = 1e-12;

struct ClassifierWeightAudit {
  ConfusionMatrix validation;
  ConfusionMatrix cost_adjusted;
  double micro_f1 = 0.0;
  double objective_weight = 0.0;

  bool operator==(const ClassifierWeightAudit&) const = default;
};

/// Training-phase audit trail: one entry per classifier, in pool order.
struct ObjectiveWeightReport {
  std::vector<ClassifierWeightAudit> classifiers;

  WeightVector weights() const;

  bool operator==(const ObjectiveWeightReport&) const = default;
};

// Objective weight of each classifier: micro F1 of its cost-adjusted
// validation confusion matrix, floored to stay in (0, 1].
ObjectiveWeightReport objective_weights(const std::vector<ConfusionMatrix>& validation,
                                        const CostMatrix& cost);

// Concentration of a decision vector around its maximum:
// (1/(m-1)) * sum_l (p* - p_l). 0 for uniform, 1 for one-hot.
double individuality(std::span<const double> decision);

// Per-sample min-max normalization of individualities across classifiers.
// Degenerate spread (all equal, including k = 1) maps every weight to 1 so
// fusion falls back to the objective weights alone.
WeightVector subjective_weights(const DecisionMatrix& sample);

// w = alpha * O + (1 - alpha) * S; alpha 0.5 gives the plain O/S average.
WeightVector combine_weights(std::span<const double> objective,
                             std::span<const double> subjective,
                             double alpha = 0.5);

}  // namespace csaf
