#include "fusion.hpp"

#include <algorithm>

#include "weights.hpp"

namespace csaf {

std::string_view method_name(FusionMethod method) {
  switch (method) {
    case FusionMethod::max_voting: return "max-voting";
    case FusionMethod::average: return "average";
    case FusionMethod::af: return "af";
    case FusionMethod::cs_af: return "cs-af";
  }
  return "unknown";
}

std::optional<FusionMethod> parse_method(std::string_view name) {
  if (name == "max-voting") return FusionMethod::max_voting;
  if (name == "average") return FusionMethod::average;
  if (name == "af") return FusionMethod::af;
  if (name == "cs-af") return FusionMethod::cs_af;
  return std::nullopt;
}

FusedDecision fuse_weighted(const DecisionMatrix& sample, std::span<const double> weights) {
  if (weights.size() != sample.classifiers)
    fail(errc::dimension_mismatch, "weight count does not match classifier count");
  bool any_positive = false;
  for (double w : weights) {
    if (w < 0.0) fail(errc::validation, "fusion weights must be non-negative");
    any_positive |= w > 0.0;
  }
  if (!any_positive) fail(errc::validation, "fusion weights are all zero");

  FusedDecision decision;
  decision.fused_scores.assign(sample.classes, 0.0);
  for (std::size_t i = 0; i < sample.classifiers; ++i) {
    const auto row = sample.row(i);
    for (std::size_t l = 0; l < sample.classes; ++l)
      decision.fused_scores[l] += weights[i] * row[l];
  }
  decision.predicted_class = argmax_index(decision.fused_scores);
  decision.weights_used.assign(weights.begin(), weights.end());
  return decision;
}

FusedDecision fuse_average(const DecisionMatrix& sample) {
  if (sample.classifiers == 0) fail(errc::validation, "average fusion needs classifiers");
  const WeightVector uniform(sample.classifiers, 1.0 / static_cast<double>(sample.classifiers));
  return fuse_weighted(sample, uniform);
}

FusedDecision fuse_max_voting(const DecisionMatrix& sample) {
  if (sample.classifiers == 0) fail(errc::validation, "max voting needs classifiers");

  FusedDecision decision;
  decision.fused_scores.assign(sample.classes, 0.0);
  for (std::size_t i = 0; i < sample.classifiers; ++i)
    decision.fused_scores[argmax_index(sample.row(i))] += 1.0;

  const double top_votes = *std::max_element(decision.fused_scores.begin(),
                                             decision.fused_scores.end());
  // Posterior sums settle vote ties; vote counts are coarse.
  std::size_t best = sample.classes;
  double best_posterior = 0.0;
  for (std::size_t l = 0; l < sample.classes; ++l) {
    if (decision.fused_scores[l] != top_votes) continue;
    double posterior = 0.0;
    for (std::size_t i = 0; i < sample.classifiers; ++i) posterior += sample.row(i)[l];
    if (best == sample.classes || posterior > best_posterior) {
      best = l;
      best_posterior = posterior;
    }
  }
  decision.predicted_class = best;
  decision.weights_used.assign(sample.classifiers, 1.0);
  return decision;
}

FusedDecision fuse_active(const DecisionMatrix& sample, std::span<const double> objective,
                          double alpha) {
  const WeightVector subjective = subjective_weights(sample);
  const WeightVector combined = combine_weights(objective, subjective, alpha);
  return fuse_weighted(sample, combined);
}

FusionEngine FusionEngine::make_static(FusionMethod method, ClassSchema schema) {
  if (method != FusionMethod::max_voting && method != FusionMethod::average)
    fail(errc::invalid_argument, "static engine requires max-voting or average");
  FusionEngine engine;
  engine.method = method;
  engine.schema = std::move(schema);
  return engine;
}

FusionEngine FusionEngine::make_active(FusionMethod method, ClassSchema schema,
                                       WeightVector objective, double alpha) {
  if (method != FusionMethod::af && method != FusionMethod::cs_af)
    fail(errc::invalid_argument, "active engine requires af or cs-af");
  if (objective.empty()) fail(errc::validation, "active engine needs objective weights");
  for (double w : objective)
    if (!(w > 0.0 && w <= 1.0)) fail(errc::validation, "objective weights must lie in (0,1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(errc::invalid_argument, "alpha must lie in [0,1]");
  FusionEngine engine;
  engine.method = method;
  engine.schema = std::move(schema);
  engine.objective = std::move(objective);
  engine.alpha = alpha;
  return engine;
}

FusedDecision FusionEngine::fuse(const DecisionMatrix& sample) const {
  if (sample.classes != schema.size())
    fail(errc::dimension_mismatch, "sample class count does not match engine schema");
  switch (method) {
    case FusionMethod::max_voting: return fuse_max_voting(sample);
    case FusionMethod::average: return fuse_average(sample);
    case FusionMethod::af:
    case FusionMethod::cs_af: return fuse_active(sample, objective, alpha);
  }
  fail(errc::invalid_argument, "unknown fusion method");
}

std::vector<FusedDecision> predict_batch(const FusionEngine& engine,
                                         const PredictionSet& samples) {
  samples.validate();
  if (samples.classes != engine.schema.size())
    fail(errc::dimension_mismatch, "prediction set class count does not match engine schema");
  if ((engine.method == FusionMethod::af || engine.method == FusionMethod::cs_af) &&
      engine.objective.size() != samples.classifier_count())
    fail(errc::dimension_mismatch, "objective weight count does not match classifier count");

  std::vector<FusedDecision> decisions;
  decisions.reserve(samples.sample_count());
  DecisionMatrix dm = DecisionMatrix::create(std::max<std::size_t>(samples.classifier_count(), 1),
                                             samples.classes);
  std::vector<std::size_t> all(samples.classifier_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  for (std::size_t s = 0; s < samples.sample_count(); ++s) {
    samples.gather(all, s, dm);
    decisions.push_back(engine.fuse(dm));
  }
  return decisions;
}

}  // namespace csaf
