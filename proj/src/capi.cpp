#include "csaf/csaf.h"

#include <memory>
#include <new>
#include <string>
#include <vector>

#include "costmat.hpp"
#include "dataio.hpp"
#include "harness.hpp"
#include "synth.hpp"
#include "types.hpp"

namespace {

thread_local std::string t_last_error;

csaf_status map_code(csaf::errc code) {
  switch (code) {
    case csaf::errc::invalid_argument: return CSAF_ERROR_INVALID_ARGUMENT;
    case csaf::errc::validation: return CSAF_ERROR_VALIDATION;
    case csaf::errc::parse: return CSAF_ERROR_PARSE;
    case csaf::errc::io: return CSAF_ERROR_IO;
    case csaf::errc::dimension_mismatch: return CSAF_ERROR_DIMENSION_MISMATCH;
    case csaf::errc::unsupported: return CSAF_ERROR_UNSUPPORTED;
  }
  return CSAF_ERROR_INTERNAL;
}

template <typename F>
csaf_status guarded(F&& fn) noexcept {
  try {
    fn();
    return CSAF_OK;
  } catch (const csaf::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return CSAF_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return CSAF_ERROR_INTERNAL;
  }
}

csaf_status invalid(const char* message) {
  t_last_error = message;
  return CSAF_ERROR_INVALID_ARGUMENT;
}

std::vector<std::string> collect_names(const char* const* names, size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    if (!names[i]) csaf::fail(csaf::errc::invalid_argument, "NULL name in list");
    out.emplace_back(names[i]);
  }
  return out;
}

std::optional<csaf::FusionMethod> to_method(csaf_method method) {
  switch (method) {
    case CSAF_METHOD_MAX_VOTING: return csaf::FusionMethod::max_voting;
    case CSAF_METHOD_AVERAGE: return csaf::FusionMethod::average;
    case CSAF_METHOD_AF: return csaf::FusionMethod::af;
    case CSAF_METHOD_CS_AF: return csaf::FusionMethod::cs_af;
  }
  return std::nullopt;
}

constexpr const char* kDefaultClasses[] = {"MEL", "SCC", "BCC", "NV",
                                           "AK",  "DF",  "VASC", "BKL"};

csaf::SyntheticPoolSpec to_spec(const csaf_synth_params& params) {
  if (!params.class_names || params.class_count == 0)
    csaf::fail(csaf::errc::invalid_argument, "synth params need class names");
  std::vector<std::string> severity;
  if (params.severity_names) severity = collect_names(params.severity_names, params.class_count);
  csaf::SyntheticPoolSpec spec;
  spec.seed = params.seed;
  spec.classifiers = params.classifier_count;
  spec.schema =
      csaf::ClassSchema::create(collect_names(params.class_names, params.class_count), severity);
  spec.n_val = params.n_val;
  spec.n_test = params.n_test;
  spec.accuracy_lo = params.accuracy_lo;
  spec.accuracy_hi = params.accuracy_hi;
  spec.sharpness_correct = params.sharpness_correct;
  spec.sharpness_wrong = params.sharpness_wrong;
  for (size_t i = 0; i < params.bias_count; ++i) {
    if (!params.bias) csaf::fail(csaf::errc::invalid_argument, "bias_count set but bias is NULL");
    spec.confusion_bias.push_back({params.bias[i].classifier, params.bias[i].from_class,
                                   params.bias[i].to_class, params.bias[i].extra_error});
  }
  return spec;
}

}  // namespace

struct csaf_schema {
  csaf::ClassSchema value;
};

struct csaf_costmat {
  std::string name;
  std::vector<std::string> class_names;
  csaf::CostMatrix value;
};

struct csaf_pool {
  csaf::ClassifierPool value;
  csaf_schema schema_view;  // borrowed by csaf_pool_schema
};

struct csaf_engine {
  csaf::EngineBuild build;
};

struct csaf_eval {
  csaf::EvaluationReport report;
};

struct csaf_experiment {
  csaf::ExperimentReport report;
};

extern "C" {

const char* csaf_version(void) { return "1.0.0"; }

const char* csaf_status_name(csaf_status status) {
  switch (status) {
    case CSAF_OK: return "ok";
    case CSAF_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case CSAF_ERROR_VALIDATION: return "validation error";
    case CSAF_ERROR_PARSE: return "parse error";
    case CSAF_ERROR_IO: return "io error";
    case CSAF_ERROR_DIMENSION_MISMATCH: return "dimension mismatch";
    case CSAF_ERROR_UNSUPPORTED: return "unsupported";
    case CSAF_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* csaf_last_error(void) { return t_last_error.c_str(); }

/* ---- schema ------------------------------------------------------------ */

csaf_status csaf_schema_create(const char* const* class_names, size_t class_count,
                               const char* const* severity_names, csaf_schema** out) {
  if (!class_names || !out) return invalid("class_names and out must not be NULL");
  return guarded([&] {
    std::vector<std::string> severity;
    if (severity_names) severity = collect_names(severity_names, class_count);
    auto schema = std::make_unique<csaf_schema>();
    schema->value = csaf::ClassSchema::create(collect_names(class_names, class_count), severity);
    *out = schema.release();
  });
}

void csaf_schema_free(csaf_schema* schema) { delete schema; }

size_t csaf_schema_class_count(const csaf_schema* schema) {
  return schema ? schema->value.size() : 0;
}

const char* csaf_schema_class_name(const csaf_schema* schema, size_t index) {
  if (!schema || index >= schema->value.size()) return nullptr;
  return schema->value.names[index].c_str();
}

csaf_status csaf_schema_severity_rank(const csaf_schema* schema, size_t index, size_t* out) {
  if (!schema || !out) return invalid("schema and out must not be NULL");
  if (index >= schema->value.size()) return invalid("class index out of range");
  *out = schema->value.severity_rank[index];
  return CSAF_OK;
}

/* ---- cost matrices ----------------------------------------------------- */

csaf_status csaf_costmat_build(const csaf_schema* schema, int reverse_severity,
                               double scale_lo, double scale_hi, int round_to_int,
                               csaf_costmat** out) {
  if (!schema || !out) return invalid("schema and out must not be NULL");
  return guarded([&] {
    const csaf::ClassSchema effective =
        reverse_severity ? schema->value.reversed_severity() : schema->value;
    csaf::CostMatrixSpec spec = csaf::CostMatrixSpec::defaults(effective);
    spec.offdiag_scale_min = scale_lo;
    spec.offdiag_scale_max = scale_hi;
    spec.round_offdiagonals = round_to_int != 0;
    auto costmat = std::make_unique<csaf_costmat>();
    costmat->name = "costmat";
    costmat->class_names = effective.names;
    costmat->value = csaf::build_cost_matrix(spec);
    *out = costmat.release();
  });
}

csaf_status csaf_costmat_uniform(const csaf_schema* schema, csaf_costmat** out) {
  if (!schema || !out) return invalid("schema and out must not be NULL");
  return guarded([&] {
    auto costmat = std::make_unique<csaf_costmat>();
    costmat->name = "uniform";
    costmat->class_names = schema->value.names;
    costmat->value = csaf::uniform_cost_matrix(schema->value.size());
    *out = costmat.release();
  });
}

csaf_status csaf_costmat_load(const char* path, csaf_costmat** out) {
  if (!path || !out) return invalid("path and out must not be NULL");
  return guarded([&] {
    csaf::LoadedCostMatrix loaded = csaf::load_cost_matrix(path);
    auto costmat = std::make_unique<csaf_costmat>();
    costmat->name = std::filesystem::path(path).stem().string();
    costmat->class_names = std::move(loaded.class_names);
    costmat->value = std::move(loaded.matrix);
    *out = costmat.release();
  });
}

csaf_status csaf_costmat_save(const csaf_costmat* costmat, const char* path) {
  if (!costmat || !path) return invalid("costmat and path must not be NULL");
  return guarded([&] { csaf::save_cost_matrix(path, costmat->class_names, costmat->value); });
}

size_t csaf_costmat_class_count(const csaf_costmat* costmat) {
  return costmat ? costmat->value.classes : 0;
}

csaf_status csaf_costmat_cell(const csaf_costmat* costmat, size_t true_class,
                              size_t predicted_class, double* out) {
  if (!costmat || !out) return invalid("costmat and out must not be NULL");
  if (true_class >= costmat->value.classes || predicted_class >= costmat->value.classes)
    return invalid("class index out of range");
  *out = costmat->value.at(true_class, predicted_class);
  return CSAF_OK;
}

csaf_status csaf_costmat_set_name(csaf_costmat* costmat, const char* name) {
  if (!costmat || !name) return invalid("costmat and name must not be NULL");
  costmat->name = name;
  return CSAF_OK;
}

const char* csaf_costmat_name(const csaf_costmat* costmat) {
  return costmat ? costmat->name.c_str() : nullptr;
}

void csaf_costmat_free(csaf_costmat* costmat) { delete costmat; }

/* ---- pools ------------------------------------------------------------- */

namespace {

csaf_pool* wrap_pool(csaf::ClassifierPool&& value) {
  auto pool = std::make_unique<csaf_pool>();
  pool->value = std::move(value);
  pool->schema_view.value = pool->value.schema;
  return pool.release();
}

}  // namespace

csaf_status csaf_pool_load(const char* manifest_path, int renormalize, csaf_pool** out) {
  if (!manifest_path || !out) return invalid("manifest_path and out must not be NULL");
  return guarded([&] { *out = wrap_pool(csaf::load_pool(manifest_path, renormalize != 0)); });
}

void csaf_pool_free(csaf_pool* pool) { delete pool; }

size_t csaf_pool_classifier_count(const csaf_pool* pool) {
  return pool ? pool->value.classifier_count() : 0;
}

size_t csaf_pool_class_count(const csaf_pool* pool) {
  return pool ? pool->value.schema.size() : 0;
}

size_t csaf_pool_sample_count(const csaf_pool* pool, int test_split) {
  if (!pool) return 0;
  return test_split ? pool->value.test.sample_count() : pool->value.validation.sample_count();
}

const csaf_schema* csaf_pool_schema(const csaf_pool* pool) {
  return pool ? &pool->schema_view : nullptr;
}

const char* csaf_pool_classifier_id(const csaf_pool* pool, size_t index) {
  if (!pool || index >= pool->value.classifier_ids.size()) return nullptr;
  return pool->value.classifier_ids[index].c_str();
}

const char* csaf_pool_warning(const csaf_pool* pool, size_t index) {
  if (!pool || index >= pool->value.warnings.size()) return nullptr;
  return pool->value.warnings[index].c_str();
}

/* ---- synthetic pools ---------------------------------------------------- */

void csaf_synth_params_init(csaf_synth_params* params) {
  if (!params) return;
  params->seed = 0;
  params->classifier_count = 16;
  params->class_names = kDefaultClasses;
  params->class_count = 8;
  params->severity_names = nullptr;
  params->n_val = 2000;
  params->n_test = 4000;
  params->accuracy_lo = 0.55;
  params->accuracy_hi = 0.85;
  params->sharpness_correct = 4.0;
  params->sharpness_wrong = 1.5;
  params->bias = nullptr;
  params->bias_count = 0;
}

csaf_status csaf_synth_write(const csaf_synth_params* params, const char* out_dir) {
  if (!params || !out_dir) return invalid("params and out_dir must not be NULL");
  return guarded([&] {
    const csaf::SyntheticPoolSpec spec = to_spec(*params);
    csaf::write_pool(out_dir, spec.schema, csaf::generate_pool(spec));
  });
}

csaf_status csaf_synth_create_pool(const csaf_synth_params* params, csaf_pool** out) {
  if (!params || !out) return invalid("params and out must not be NULL");
  return guarded([&] {
    const csaf::SyntheticPoolSpec spec = to_spec(*params);
    csaf::SyntheticPool generated = csaf::generate_pool(spec);
    csaf::ClassifierPool pool;
    pool.schema = spec.schema;
    pool.classifier_ids = csaf::default_classifier_ids(spec.classifiers);
    pool.validation = std::move(generated.validation);
    pool.test = std::move(generated.test);
    *out = wrap_pool(std::move(pool));
  });
}

/* ---- engines ------------------------------------------------------------ */

csaf_status csaf_engine_create(const csaf_pool* pool, csaf_method method,
                               const csaf_costmat* costmat, double alpha, csaf_engine** out) {
  if (!pool || !out) return invalid("pool and out must not be NULL");
  const auto fusion_method = to_method(method);
  if (!fusion_method) return invalid("unknown fusion method");
  return guarded([&] {
    if (costmat) csaf::require_schema_names(costmat->class_names, pool->value.schema);
    auto engine = std::make_unique<csaf_engine>();
    engine->build = csaf::build_engine(pool->value, *fusion_method,
                                       costmat ? &costmat->value : nullptr,
                                       costmat ? costmat->name : "", alpha);
    *out = engine.release();
  });
}

csaf_status csaf_engine_objective_weight(const csaf_engine* engine, size_t classifier,
                                         double* out) {
  if (!engine || !out) return invalid("engine and out must not be NULL");
  const auto& objective = engine->build.engine.objective;
  if (classifier >= objective.size())
    return invalid("classifier index out of range (static engines carry no objective weights)");
  *out = objective[classifier];
  return CSAF_OK;
}

void csaf_engine_free(csaf_engine* engine) { delete engine; }

/* ---- evaluation ---------------------------------------------------------- */

csaf_status csaf_evaluate(const csaf_engine* engine, const csaf_pool* pool,
                          const csaf_costmat* const* report_costs, size_t cost_count,
                          csaf_eval** out) {
  if (!engine || !pool || !out) return invalid("engine, pool and out must not be NULL");
  if (cost_count > 0 && !report_costs) return invalid("cost_count set but report_costs is NULL");
  return guarded([&] {
    std::vector<csaf::CostMatrix> costs;
    std::vector<std::string> names;
    for (size_t i = 0; i < cost_count; ++i) {
      if (!report_costs[i]) csaf::fail(csaf::errc::invalid_argument, "NULL cost matrix");
      csaf::require_schema_names(report_costs[i]->class_names, pool->value.schema);
      costs.push_back(report_costs[i]->value);
      names.push_back(report_costs[i]->name);
    }
    auto eval = std::make_unique<csaf_eval>();
    eval->report = csaf::evaluate_engine(engine->build, pool->value, costs, names);
    *out = eval.release();
  });
}

size_t csaf_eval_sample_count(const csaf_eval* eval) {
  return eval ? eval->report.sample_ids.size() : 0;
}

csaf_status csaf_eval_prediction(const csaf_eval* eval, size_t sample, size_t* out) {
  if (!eval || !out) return invalid("eval and out must not be NULL");
  if (sample >= eval->report.predicted.size()) return invalid("sample index out of range");
  *out = eval->report.predicted[sample];
  return CSAF_OK;
}

csaf_status csaf_eval_accuracy(const csaf_eval* eval, double* out) {
  if (!eval || !out) return invalid("eval and out must not be NULL");
  if (!eval->report.metrics) {
    t_last_error = "test split is unlabeled; no accuracy available";
    return CSAF_ERROR_UNSUPPORTED;
  }
  *out = eval->report.metrics->accuracy;
  return CSAF_OK;
}

csaf_status csaf_eval_total_cost(const csaf_eval* eval, size_t cost_index, double* out) {
  if (!eval || !out) return invalid("eval and out must not be NULL");
  if (!eval->report.metrics) {
    t_last_error = "test split is unlabeled; no total cost available";
    return CSAF_ERROR_UNSUPPORTED;
  }
  if (cost_index >= eval->report.metrics->total_costs.size())
    return invalid("cost index out of range");
  *out = eval->report.metrics->total_costs[cost_index];
  return CSAF_OK;
}

csaf_status csaf_eval_save_report(const csaf_eval* eval, const char* path,
                                  csaf_report_format format) {
  if (!eval || !path) return invalid("eval and path must not be NULL");
  return guarded([&] {
    csaf::write_evaluation_report(eval->report, path,
                                  format == CSAF_FORMAT_CSV ? csaf::ReportFormat::csv
                                                            : csaf::ReportFormat::json);
  });
}

csaf_status csaf_eval_save_predictions(const csaf_eval* eval, const char* path) {
  if (!eval || !path) return invalid("eval and path must not be NULL");
  return guarded([&] { csaf::write_fused_predictions(eval->report, path); });
}

void csaf_eval_free(csaf_eval* eval) { delete eval; }

/* ---- experiments ---------------------------------------------------------- */

csaf_status csaf_experiment_run(const csaf_pool* pool, const csaf_contestant* contestants,
                                size_t contestant_count, const size_t* subset_sizes,
                                size_t size_count, size_t repetitions, uint64_t seed,
                                const csaf_costmat* const* costs, size_t cost_count,
                                double alpha, unsigned threads, csaf_experiment** out) {
  if (!pool || !contestants || !subset_sizes || !out)
    return invalid("pool, contestants, subset_sizes and out must not be NULL");
  if (cost_count > 0 && !costs) return invalid("cost_count set but costs is NULL");
  return guarded([&] {
    std::vector<csaf::CostMatrix> cost_values;
    std::vector<std::string> cost_names;
    for (size_t i = 0; i < cost_count; ++i) {
      if (!costs[i]) csaf::fail(csaf::errc::invalid_argument, "NULL cost matrix");
      csaf::require_schema_names(costs[i]->class_names, pool->value.schema);
      cost_values.push_back(costs[i]->value);
      cost_names.push_back(costs[i]->name);
    }

    csaf::ExperimentConfig config;
    for (size_t i = 0; i < contestant_count; ++i) {
      const auto method = to_method(contestants[i].method);
      if (!method) csaf::fail(csaf::errc::invalid_argument, "unknown fusion method");
      csaf::Contestant contestant;
      contestant.method = *method;
      contestant.cost_index = contestants[i].cost_index;
      contestant.name = std::string(csaf::method_name(*method));
      if (*method == csaf::FusionMethod::cs_af) {
        if (contestants[i].cost_index < 0 ||
            static_cast<size_t>(contestants[i].cost_index) >= cost_count)
          csaf::fail(csaf::errc::invalid_argument, "cs-af contestant needs a valid cost index");
        contestant.name += "(" + cost_names[contestants[i].cost_index] + ")";
      }
      config.contestants.push_back(std::move(contestant));
    }
    config.subset_sizes.assign(subset_sizes, subset_sizes + size_count);
    config.repetitions = repetitions;
    config.seed = seed;
    config.alpha = alpha;
    config.threads = threads;

    auto experiment = std::make_unique<csaf_experiment>();
    experiment->report =
        csaf::run_subset_experiment(pool->value, cost_values, cost_names, config);
    *out = experiment.release();
  });
}

csaf_status csaf_experiment_accuracy(const csaf_experiment* experiment, size_t contestant,
                                     size_t size_index, double* mean, double* stddev) {
  if (!experiment || !mean) return invalid("experiment and mean must not be NULL");
  const auto& report = experiment->report;
  if (contestant >= report.contestant_names.size() || size_index >= report.subset_sizes.size())
    return invalid("contestant or size index out of range");
  const auto& stats = report.cells[contestant][size_index].accuracy;
  *mean = stats.mean;
  if (stddev) *stddev = stats.stddev;
  return CSAF_OK;
}

csaf_status csaf_experiment_total_cost(const csaf_experiment* experiment, size_t contestant,
                                       size_t size_index, size_t cost_index, double* mean,
                                       double* stddev) {
  if (!experiment || !mean) return invalid("experiment and mean must not be NULL");
  const auto& report = experiment->report;
  if (contestant >= report.contestant_names.size() || size_index >= report.subset_sizes.size() ||
      cost_index >= report.cost_names.size())
    return invalid("contestant, size or cost index out of range");
  const auto& stats = report.cells[contestant][size_index].total_cost[cost_index];
  *mean = stats.mean;
  if (stddev) *stddev = stats.stddev;
  return CSAF_OK;
}

csaf_status csaf_experiment_pooled_sensitivity(const csaf_experiment* experiment,
                                               size_t contestant, size_t class_index,
                                               double* out) {
  if (!experiment || !out) return invalid("experiment and out must not be NULL");
  const auto& report = experiment->report;
  if (contestant >= report.contestant_names.size() || class_index >= report.class_names.size())
    return invalid("contestant or class index out of range");
  const auto value = report.pooled_sensitivity(contestant, class_index);
  if (!value) {
    t_last_error = "class never appears in the test draws";
    return CSAF_ERROR_UNSUPPORTED;
  }
  *out = *value;
  return CSAF_OK;
}

csaf_status csaf_experiment_save(const csaf_experiment* experiment, const char* out_dir) {
  if (!experiment || !out_dir) return invalid("experiment and out_dir must not be NULL");
  return guarded([&] { csaf::write_experiment(experiment->report, out_dir); });
}

void csaf_experiment_free(csaf_experiment* experiment) { delete experiment; }

} /* extern "C" */
