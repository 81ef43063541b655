#pragma once

#include <cstdint>

#include "fusion.hpp"
#include "types.hpp"
#include "weights.hpp"

namespace csaf {

/// One fusion method entered into an experiment. cs-af contestants carry the
/// index of the cost matrix their objective weights are built with.
struct Contestant {
  FusionMethod method = FusionMethod::average;
  int cost_index = -1;  // >= 0 for cs_af only
  std::string name;     // display label, e.g. "cs-af(A)"
};

/// Scalar metrics of one engine on one labeled split.
struct MethodEvaluation {
  std::string method;
  double alpha = 0.5;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  std::vector<double> total_costs;                 // per cost matrix
  std::vector<std::optional<double>> sensitivity;  // per class; absent = empty row
  std::vector<std::optional<double>> specificity;

  bool operator==(const MethodEvaluation&) const = default;
};

MethodEvaluation evaluate_decisions(const std::string& name, double alpha,
                                    std::span<const std::size_t> predicted,
                                    std::span<const std::size_t> truth,
                                    std::size_t classes,
                                    const std::vector<CostMatrix>& costs);

/// Per-classifier objective-weight audit attached to reports.
struct ObjectiveAudit {
  std::vector<std::string> classifier_ids;
  std::string cost_label;  // "uniform" for plain af
  ObjectiveWeightReport report;

  bool operator==(const ObjectiveAudit&) const = default;
};

/// Everything the `fuse` workflow emits for one engine on the test split.
struct EvaluationReport {
  ClassSchema schema;
  std::string method;
  double alpha = 0.5;
  std::vector<std::string> cost_names;
  std::vector<std::string> sample_ids;
  std::vector<std::size_t> predicted;              // class index per sample
  std::vector<std::vector<double>> fused_scores;   // normalized view, per sample
  std::optional<MethodEvaluation> metrics;         // present when the split is labeled
  std::optional<ObjectiveAudit> objective;

  bool operator==(const EvaluationReport&) const = default;
};

struct EngineBuild {
  FusionEngine engine;
  std::optional<ObjectiveAudit> audit;
};

// Builds an engine from a pool: static methods need nothing, af derives
// objective weights from the labeled validation split with the uniform cost
// matrix, cs-af with the supplied one.
EngineBuild build_engine(const ClassifierPool& pool, FusionMethod method,
                         const CostMatrix* cost, const std::string& cost_label,
                         double alpha);

// Fuses the pool's test split and assembles the full report. `costs` are
// used for total-cost metrics when labels are present.
EvaluationReport evaluate_engine(const EngineBuild& build, const ClassifierPool& pool,
                                 const std::vector<CostMatrix>& costs,
                                 const std::vector<std::string>& cost_names);

/// Per-class sensitivity/specificity table for several engines on one split.
struct PerClassReport {
  std::vector<std::string> class_names;
  std::vector<std::string> cost_names;
  std::vector<MethodEvaluation> rows;  // one per engine
};

PerClassReport per_class_report(std::span<const EngineBuild> engines,
                                const ClassifierPool& pool,
                                const std::vector<CostMatrix>& costs,
                                const std::vector<std::string>& cost_names);

struct ExperimentConfig {
  std::vector<Contestant> contestants;
  std::vector<std::size_t> subset_sizes;
  std::size_t repetitions = 100;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  unsigned threads = 0;  // 0 = hardware parallelism
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;       // population standard deviation over repetitions
  std::size_t count = 0;     // repetitions contributing (per-class metrics may skip)

  bool operator==(const MetricStats&) const = default;
};

/// Aggregates for one (contestant, subset size) cell.
struct CellAggregate {
  MetricStats accuracy;
  std::vector<MetricStats> total_cost;   // per cost matrix
  std::vector<MetricStats> sensitivity;  // per class
  std::vector<MetricStats> specificity;
};

/// Raw per-repetition outcome, kept for audits and recomputation.
struct RepetitionRecord {
  std::vector<std::size_t> subset;          // classifier indices, ascending
  std::vector<ConfusionMatrix> confusions;  // one per contestant
};

struct ExperimentReport {
  std::vector<std::string> class_names;
  std::vector<std::string> contestant_names;
  std::vector<std::size_t> subset_sizes;
  std::vector<std::string> cost_names;
  std::size_t repetitions = 0;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  std::vector<std::vector<CellAggregate>> cells;   // [contestant][size]
  std::vector<std::vector<RepetitionRecord>> logs;  // [size][repetition]

  // Pooled mean over every (size, repetition) pair; absent cells skipped.
  std::optional<double> pooled_sensitivity(std::size_t contestant, std::size_t cls) const;
};

// The random-subset protocol: for each subset size and repetition, draw a
// uniform without-replacement classifier subset from substream
// (seed, size, repetition) and score every contestant on the identical
// subset. Aggregation order is fixed regardless of thread count.
ExperimentReport run_subset_experiment(const ClassifierPool& pool,
                                       const std::vector<CostMatrix>& costs,
                                       const std::vector<std::string>& cost_names,
                                       const ExperimentConfig& config);

// Trend hook: descriptions of every (contestant, consecutive size pair) whose
// mean accuracy drops by more than `slack`. Empty = trend holds.
std::vector<std::string> accuracy_trend_violations(const ExperimentReport& report,
                                                   double slack);

}  // namespace csaf
