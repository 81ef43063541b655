#pragma once

#include <string_view>

#include "types.hpp"

namespace csaf {

enum class FusionMethod { max_voting, average, af, cs_af };

std::string_view method_name(FusionMethod method);
std::optional<FusionMethod> parse_method(std::string_view name);

/// Final verdict for one sample. fused_scores holds the weighted posterior
/// sums (vote counts for max voting); they are intentionally not renormalized,
/// only the argmax matters.
struct FusedDecision {
  std::size_t predicted_class = 0;
  std::vector<double> fused_scores;
  WeightVector weights_used;
};

// Weighted posterior sum per class, argmax with lowest-index tie-break.
FusedDecision fuse_weighted(const DecisionMatrix& sample, std::span<const double> weights);

// Uniform 1/k weights.
FusedDecision fuse_average(const DecisionMatrix& sample);

// Each classifier votes its own argmax; class ties are broken by the larger
// posterior sum over the tied classes, then by lowest index. fused_scores
// reports vote counts.
FusedDecision fuse_max_voting(const DecisionMatrix& sample);

// Active fusion: subjective weights from this sample, combined with the
// frozen objective weights, then a weighted sum. Covers both the plain and
// the cost-sensitive variant (they differ only in how `objective` was built).
FusedDecision fuse_active(const DecisionMatrix& sample, std::span<const double> objective,
                          double alpha);

/// A configured fusion method with frozen objective weights. Immutable after
/// construction; fuse() is safe to call concurrently.
struct FusionEngine {
  FusionMethod method = FusionMethod::average;
  ClassSchema schema;
  WeightVector objective;  // af / cs_af only
  double alpha = 0.5;

  static FusionEngine make_static(FusionMethod method, ClassSchema schema);
  static FusionEngine make_active(FusionMethod method, ClassSchema schema,
                                  WeightVector objective, double alpha = 0.5);

  FusedDecision fuse(const DecisionMatrix& sample) const;
};

// One decision per sample, in input order.
std::vector<FusedDecision> predict_batch(const FusionEngine& engine,
                                         const PredictionSet& samples);

}  // namespace csaf
