#include "harness.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "costmat.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace csaf {

namespace {

enum : std::uint64_t { kRoleSubset = 11 };

std::vector<double> normalized_scores(const FusedDecision& decision) {
  double sum = 0.0;
  for (double s : decision.fused_scores) sum += s;
  std::vector<double> out = decision.fused_scores;
  if (sum > 0.0)
    for (double& s : out) s /= sum;
  return out;
}

MetricStats aggregate(const std::vector<double>& values, const std::vector<char>& present) {
  MetricStats stats;
  double sum = 0.0, lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!present[i]) continue;
    sum += values[i];
    lo = stats.count == 0 ? values[i] : std::min(lo, values[i]);
    hi = stats.count == 0 ? values[i] : std::max(hi, values[i]);
    ++stats.count;
  }
  if (stats.count == 0) return stats;
  if (lo == hi) {  // identical repetitions carry no sampling variance
    stats.mean = lo;
    return stats;
  }
  stats.mean = sum / static_cast<double>(stats.count);
  double sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!present[i]) continue;
    const double d = values[i] - stats.mean;
    sq += d * d;
  }
  stats.stddev = std::sqrt(sq / static_cast<double>(stats.count));
  return stats;
}

}  // namespace

MethodEvaluation evaluate_decisions(const std::string& name, double alpha,
                                    std::span<const std::size_t> predicted,
                                    std::span<const std::size_t> truth,
                                    std::size_t classes,
                                    const std::vector<CostMatrix>& costs) {
  MethodEvaluation eval;
  eval.method = name;
  eval.alpha = alpha;
  eval.confusion = confusion_matrix(predicted, truth, classes);
  eval.accuracy = accuracy(eval.confusion);
  for (const auto& cost : costs) eval.total_costs.push_back(total_cost(eval.confusion, cost));
  for (std::size_t cls = 0; cls < classes; ++cls) {
    eval.sensitivity.push_back(sensitivity(eval.confusion, cls));
    eval.specificity.push_back(specificity(eval.confusion, cls));
  }
  return eval;
}

EngineBuild build_engine(const ClassifierPool& pool, FusionMethod method,
                         const CostMatrix* cost, const std::string& cost_label,
                         double alpha) {
  EngineBuild build;
  if (method == FusionMethod::max_voting || method == FusionMethod::average) {
    if (cost) fail(errc::invalid_argument, "static fusion methods take no cost matrix");
    build.engine = FusionEngine::make_static(method, pool.schema);
    return build;
  }

  if (method == FusionMethod::af && cost)
    fail(errc::invalid_argument, "af takes no cost matrix; use cs-af");
  if (method == FusionMethod::cs_af && !cost)
    fail(errc::invalid_argument, "cs-af requires a cost matrix");
  if (!pool.validation.labels)
    fail(errc::validation, "active fusion needs a labeled validation split");

  const CostMatrix effective =
      method == FusionMethod::af ? uniform_cost_matrix(pool.schema.size()) : *cost;
  ObjectiveWeightReport report =
      objective_weights(validation_confusions(pool.validation), effective);

  ObjectiveAudit audit;
  audit.classifier_ids = pool.classifier_ids;
  audit.cost_label = method == FusionMethod::af ? "uniform" : cost_label;
  audit.report = report;

  build.engine = FusionEngine::make_active(method, pool.schema, report.weights(), alpha);
  build.audit = std::move(audit);
  return build;
}

EvaluationReport evaluate_engine(const EngineBuild& build, const ClassifierPool& pool,
                                 const std::vector<CostMatrix>& costs,
                                 const std::vector<std::string>& cost_names) {
  if (costs.size() != cost_names.size())
    fail(errc::invalid_argument, "cost matrix and name counts differ");

  EvaluationReport report;
  report.schema = pool.schema;
  report.method = std::string(method_name(build.engine.method));
  report.alpha = build.engine.alpha;
  report.cost_names = cost_names;
  report.sample_ids = pool.test.sample_ids;
  report.objective = build.audit;

  const std::vector<FusedDecision> decisions = predict_batch(build.engine, pool.test);
  report.predicted.reserve(decisions.size());
  report.fused_scores.reserve(decisions.size());
  for (const auto& d : decisions) {
    report.predicted.push_back(d.predicted_class);
    report.fused_scores.push_back(normalized_scores(d));
  }

  if (pool.test.labels) {
    report.metrics = evaluate_decisions(report.method, report.alpha, report.predicted,
                                        *pool.test.labels, pool.schema.size(), costs);
  }
  return report;
}

PerClassReport per_class_report(std::span<const EngineBuild> engines,
                                const ClassifierPool& pool,
                                const std::vector<CostMatrix>& costs,
                                const std::vector<std::string>& cost_names) {
  if (!pool.test.labels) fail(errc::validation, "per-class report needs a labeled test split");
  PerClassReport report;
  report.class_names = pool.schema.names;
  report.cost_names = cost_names;
  for (const auto& build : engines) {
    const std::vector<FusedDecision> decisions = predict_batch(build.engine, pool.test);
    std::vector<std::size_t> predicted;
    predicted.reserve(decisions.size());
    for (const auto& d : decisions) predicted.push_back(d.predicted_class);
    report.rows.push_back(evaluate_decisions(std::string(method_name(build.engine.method)),
                                             build.engine.alpha, predicted,
                                             *pool.test.labels, pool.schema.size(), costs));
  }
  return report;
}

std::optional<double> ExperimentReport::pooled_sensitivity(std::size_t contestant,
                                                           std::size_t cls) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t size_idx = 0; size_idx < subset_sizes.size(); ++size_idx) {
    for (const auto& rep : logs[size_idx]) {
      const auto value = csaf::sensitivity(rep.confusions[contestant], cls);
      if (value) {
        sum += *value;
        ++count;
      }
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

ExperimentReport run_subset_experiment(const ClassifierPool& pool,
                                       const std::vector<CostMatrix>& costs,
                                       const std::vector<std::string>& cost_names,
                                       const ExperimentConfig& config) {
  const std::size_t k = pool.classifier_count();
  const std::size_t m = pool.schema.size();
  if (config.contestants.empty()) fail(errc::invalid_argument, "no fusion methods selected");
  if (config.repetitions == 0) fail(errc::invalid_argument, "repetitions must be at least 1");
  if (costs.size() != cost_names.size())
    fail(errc::invalid_argument, "cost matrix and name counts differ");
  for (std::size_t n : config.subset_sizes) {
    if (n == 0 || n > k)
      fail(errc::invalid_argument,
           "subset size " + std::to_string(n) + " exceeds pool of " + std::to_string(k));
  }
  if (!pool.test.labels) fail(errc::validation, "experiment needs a labeled test split");
  pool.test.validate();

  bool needs_objective = false;
  for (const auto& c : config.contestants) {
    if (c.method == FusionMethod::cs_af &&
        (c.cost_index < 0 || static_cast<std::size_t>(c.cost_index) >= costs.size()))
      fail(errc::invalid_argument, "cs-af contestant needs a valid cost matrix index");
    needs_objective |= c.method == FusionMethod::af || c.method == FusionMethod::cs_af;
  }

  // Objective weights are per classifier and do not depend on the subset, so
  // they are computed once up front.
  WeightVector af_weights;
  std::vector<WeightVector> cs_weights(costs.size());
  if (needs_objective) {
    const std::vector<ConfusionMatrix> val_cms = validation_confusions(pool.validation);
    af_weights = objective_weights(val_cms, uniform_cost_matrix(m)).weights();
    for (const auto& c : config.contestants) {
      if (c.method != FusionMethod::cs_af) continue;
      auto& slot = cs_weights[static_cast<std::size_t>(c.cost_index)];
      if (slot.empty()) slot = objective_weights(val_cms, costs[c.cost_index]).weights();
    }
  }

  ExperimentReport report;
  report.class_names = pool.schema.names;
  report.subset_sizes = config.subset_sizes;
  report.cost_names = cost_names;
  report.repetitions = config.repetitions;
  report.seed = config.seed;
  report.alpha = config.alpha;
  for (const auto& c : config.contestants) report.contestant_names.push_back(c.name);
  report.logs.assign(config.subset_sizes.size(),
                     std::vector<RepetitionRecord>(config.repetitions));

  const std::size_t n_test = pool.test.sample_count();
  const std::vector<std::size_t>& truth = *pool.test.labels;

  auto run_repetition = [&](std::size_t size_idx, std::size_t rep) {
    const std::size_t subset_size = config.subset_sizes[size_idx];
    rng::SplitMix64 stream(
        rng::substream(config.seed, {kRoleSubset, subset_size, rep}));
    RepetitionRecord& record = report.logs[size_idx][rep];
    record.subset = rng::sample_without_replacement(stream, k, subset_size);
    record.confusions.assign(config.contestants.size(), ConfusionMatrix::zeros(m));

    std::vector<WeightVector> gathered_objective(config.contestants.size());
    for (std::size_t c = 0; c < config.contestants.size(); ++c) {
      const Contestant& contestant = config.contestants[c];
      if (contestant.method == FusionMethod::af || contestant.method == FusionMethod::cs_af) {
        const WeightVector& full = contestant.method == FusionMethod::af
                                       ? af_weights
                                       : cs_weights[contestant.cost_index];
        WeightVector& slot = gathered_objective[c];
        slot.reserve(subset_size);
        for (std::size_t idx : record.subset) slot.push_back(full[idx]);
      }
    }

    DecisionMatrix dm = DecisionMatrix::create(subset_size, m);
    for (std::size_t s = 0; s < n_test; ++s) {
      pool.test.gather(record.subset, s, dm);
      for (std::size_t c = 0; c < config.contestants.size(); ++c) {
        const Contestant& contestant = config.contestants[c];
        FusedDecision decision;
        switch (contestant.method) {
          case FusionMethod::max_voting: decision = fuse_max_voting(dm); break;
          case FusionMethod::average: decision = fuse_average(dm); break;
          case FusionMethod::af:
          case FusionMethod::cs_af:
            decision = fuse_active(dm, gathered_objective[c], config.alpha);
            break;
        }
        record.confusions[c].at(truth[s], decision.predicted_class) += 1.0;
      }
    }
  };

  // (size, repetition) tasks are independent; each writes only its own slot.
  const std::size_t total_tasks = config.subset_sizes.size() * config.repetitions;
  unsigned thread_count = config.threads != 0 ? config.threads
                                              : std::max(1u, std::thread::hardware_concurrency());
  thread_count = static_cast<unsigned>(
      std::min<std::size_t>(thread_count, std::max<std::size_t>(total_tasks, 1)));
  if (thread_count <= 1) {
    for (std::size_t t = 0; t < total_tasks; ++t)
      run_repetition(t / config.repetitions, t % config.repetitions);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    for (unsigned w = 0; w < thread_count; ++w) {
      workers.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < total_tasks; t = next.fetch_add(1))
          run_repetition(t / config.repetitions, t % config.repetitions);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  // Deterministic fold in (contestant, size, repetition) order.
  report.cells.assign(config.contestants.size(),
                      std::vector<CellAggregate>(config.subset_sizes.size()));
  std::vector<double> values(config.repetitions);
  std::vector<char> present(config.repetitions);
  for (std::size_t c = 0; c < config.contestants.size(); ++c) {
    for (std::size_t size_idx = 0; size_idx < config.subset_sizes.size(); ++size_idx) {
      CellAggregate& cell = report.cells[c][size_idx];
      auto collect = [&](auto&& metric) {
        for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
          const auto value = metric(report.logs[size_idx][rep].confusions[c]);
          present[rep] = value.has_value();
          values[rep] = value.value_or(0.0);
        }
        return aggregate(values, present);
      };
      cell.accuracy = collect([](const ConfusionMatrix& cm) {
        return std::optional<double>(accuracy(cm));
      });
      for (const auto& cost : costs) {
        cell.total_cost.push_back(collect([&](const ConfusionMatrix& cm) {
          return std::optional<double>(total_cost(cm, cost));
        }));
      }
      for (std::size_t cls = 0; cls < m; ++cls) {
        cell.sensitivity.push_back(collect(
            [&](const ConfusionMatrix& cm) { return sensitivity(cm, cls); }));
        cell.specificity.push_back(collect(
            [&](const ConfusionMatrix& cm) { return specificity(cm, cls); }));
      }
    }
  }
  return report;
}

std::vector<std::string> accuracy_trend_violations(const ExperimentReport& report,
                                                   double slack) {
  std::vector<std::string> violations;
  for (std::size_t c = 0; c < report.contestant_names.size(); ++c) {
    for (std::size_t i = 0; i + 1 < report.subset_sizes.size(); ++i) {
      const double lo = report.cells[c][i].accuracy.mean;
      const double hi = report.cells[c][i + 1].accuracy.mean;
      if (hi < lo - slack) {
        violations.push_back(report.contestant_names[c] + ": mean accuracy drops from " +
                             std::to_string(lo) + " at N=" +
                             std::to_string(report.subset_sizes[i]) + " to " +
                             std::to_string(hi) + " at N=" +
                             std::to_string(report.subset_sizes[i + 1]));
      }
    }
  }
  return violations;
}

}  // namespace csaf
