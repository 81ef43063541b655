#include "weights.hpp"

#include <algorithm>

#include "metrics.hpp"

namespace csaf {

WeightVector ObjectiveWeightReport::weights() const {
  WeightVector w;
  w.reserve(classifiers.size());
  for (const auto& c : classifiers) w.push_back(c.objective_weight);
  return w;
}

ObjectiveWeightReport objective_weights(const std::vector<ConfusionMatrix>& validation,
                                        const CostMatrix& cost) {
  if (validation.empty()) fail(errc::validation, "objective weights need at least one classifier");
  ObjectiveWeightReport report;
  report.classifiers.reserve(validation.size());
  for (const auto& cm : validation) {
    ClassifierWeightAudit audit;
    audit.validation = cm;
    audit.cost_adjusted = cost_adjust(cm, cost);
    audit.micro_f1 = micro_f1(audit.cost_adjusted);
    audit.objective_weight = std::max(audit.micro_f1, kObjectiveWeightFloor);
    report.classifiers.push_back(std::move(audit));
  }
  return report;
}

double individuality(std::span<const double> decision) {
  const std::size_t m = decision.size();
  if (m < 2) fail(errc::validation, "individuality needs at least two classes");
  double peak = decision[0];
  for (double p : decision) peak = std::max(peak, p);
  double sum = 0.0;
  for (double p : decision) sum += peak - p;
  return sum / static_cast<double>(m - 1);
}

WeightVector subjective_weights(const DecisionMatrix& sample) {
  const std::size_t k = sample.classifiers;
  if (k == 0) fail(errc::validation, "subjective weights need at least one classifier");

  WeightVector individualities(k);
  for (std::size_t i = 0; i < k; ++i) individualities[i] = individuality(sample.row(i));

  const auto [lo, hi] = std::minmax_element(individualities.begin(), individualities.end());
  const double spread = *hi - *lo;
  WeightVector weights(k, 1.0);
  if (spread <= kIndividualitySpread) return weights;
  for (std::size_t i = 0; i < k; ++i) weights[i] = (individualities[i] - *lo) / spread;
  return weights;
}

WeightVector combine_weights(std::span<const double> objective,
                             std::span<const double> subjective, double alpha) {
  if (objective.size() != subjective.size())
    fail(errc::dimension_mismatch, "objective and subjective weight lengths differ");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(errc::invalid_argument, "alpha must lie in [0,1]");
  WeightVector combined(objective.size());
  for (std::size_t i = 0; i < combined.size(); ++i)
    combined[i] = alpha * objective[i] + (1.0 - alpha) * subjective[i];
  return combined;
}

}  // namespace csaf
