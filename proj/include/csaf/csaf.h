/* csaf - cost-sensitive active fusion of multi-classifier posterior outputs.
 *
 * C API of the shared library. All objects are opaque handles created and
 * released through these functions; every fallible call returns a
 * csaf_status, with a thread-local diagnostic available from
 * csaf_last_error(). Handles are immutable after creation (unless noted) and
 * may be shared across threads for reading.
 */
#ifndef CSAF_H
#define CSAF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSAF_API __declspec(dllexport)
#else
#define CSAF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csaf_status {
  CSAF_OK = 0,
  CSAF_ERROR_INVALID_ARGUMENT = 1,
  CSAF_ERROR_VALIDATION = 2, /* a domain invariant was violated */
  CSAF_ERROR_PARSE = 3,
  CSAF_ERROR_IO = 4,
  CSAF_ERROR_DIMENSION_MISMATCH = 5,
  CSAF_ERROR_UNSUPPORTED = 6,
  CSAF_ERROR_INTERNAL = 7
} csaf_status;

typedef enum csaf_method {
  CSAF_METHOD_MAX_VOTING = 0,
  CSAF_METHOD_AVERAGE = 1,
  CSAF_METHOD_AF = 2,
  CSAF_METHOD_CS_AF = 3
} csaf_method;

typedef enum csaf_report_format {
  CSAF_FORMAT_JSON = 0,
  CSAF_FORMAT_CSV = 1
} csaf_report_format;

typedef struct csaf_schema csaf_schema;         /* class names + severity ranking */
typedef struct csaf_costmat csaf_costmat;       /* m x m positive cost table */
typedef struct csaf_pool csaf_pool;             /* loaded classifier pool */
typedef struct csaf_engine csaf_engine;         /* configured fusion method */
typedef struct csaf_eval csaf_eval;             /* fused test split + metrics */
typedef struct csaf_experiment csaf_experiment; /* random-subset experiment results */

CSAF_API const char* csaf_version(void);
CSAF_API const char* csaf_status_name(csaf_status status);
/* Message for the most recent failing call on this thread; never NULL. */
CSAF_API const char* csaf_last_error(void);

/* ---- class schema ------------------------------------------------------ */

/* severity_names lists class names from most to least severe; NULL means the
 * listing order of class_names is the severity order. */
CSAF_API csaf_status csaf_schema_create(const char* const* class_names, size_t class_count,
                                        const char* const* severity_names,
                                        csaf_schema** out);
CSAF_API void csaf_schema_free(csaf_schema* schema);
CSAF_API size_t csaf_schema_class_count(const csaf_schema* schema);
CSAF_API const char* csaf_schema_class_name(const csaf_schema* schema, size_t index);
/* rank 0 = most severe */
CSAF_API csaf_status csaf_schema_severity_rank(const csaf_schema* schema, size_t index,
                                               size_t* out);

/* ---- cost matrices ----------------------------------------------------- */

/* Severity-driven construction: diagonal cost = severity rank + 1, raw
 * off-diagonal (c_jj/c_ii)^2, then min-max scaled into [scale_lo, scale_hi]
 * (rounded to integers unless round_to_int is 0). reverse_severity builds the
 * mirror-emphasis variant. */
CSAF_API csaf_status csaf_costmat_build(const csaf_schema* schema, int reverse_severity,
                                        double scale_lo, double scale_hi, int round_to_int,
                                        csaf_costmat** out);
CSAF_API csaf_status csaf_costmat_uniform(const csaf_schema* schema, csaf_costmat** out);
CSAF_API csaf_status csaf_costmat_load(const char* path, csaf_costmat** out);
CSAF_API csaf_status csaf_costmat_save(const csaf_costmat* costmat, const char* path);
CSAF_API size_t csaf_costmat_class_count(const csaf_costmat* costmat);
CSAF_API csaf_status csaf_costmat_cell(const csaf_costmat* costmat, size_t true_class,
                                       size_t predicted_class, double* out);
/* Label used in reports ("A", "B", ...); defaults to "uniform"/"costmat" or
 * the file stem. The handle stays mutable for this one field. */
CSAF_API csaf_status csaf_costmat_set_name(csaf_costmat* costmat, const char* name);
CSAF_API const char* csaf_costmat_name(const csaf_costmat* costmat);
CSAF_API void csaf_costmat_free(csaf_costmat* costmat);

/* ---- pools ------------------------------------------------------------- */

/* Loads a manifest plus every referenced prediction/label file. With
 * renormalize nonzero, non-negative prediction rows are rescaled to sum 1
 * instead of being rejected at the 1e-6 tolerance. */
CSAF_API csaf_status csaf_pool_load(const char* manifest_path, int renormalize,
                                    csaf_pool** out);
CSAF_API void csaf_pool_free(csaf_pool* pool);
CSAF_API size_t csaf_pool_classifier_count(const csaf_pool* pool);
CSAF_API size_t csaf_pool_class_count(const csaf_pool* pool);
CSAF_API size_t csaf_pool_sample_count(const csaf_pool* pool, int test_split);
/* Borrowed view, valid while the pool lives. */
CSAF_API const csaf_schema* csaf_pool_schema(const csaf_pool* pool);
CSAF_API const char* csaf_pool_classifier_id(const csaf_pool* pool, size_t index);
/* Non-fatal ingestion warnings, one per index; NULL past the end. */
CSAF_API const char* csaf_pool_warning(const csaf_pool* pool, size_t index);

/* ---- synthetic pools ---------------------------------------------------- */

typedef struct csaf_bias_entry {
  size_t classifier;
  size_t from_class;
  size_t to_class;
  double extra_error; /* share of this class's predictions forced to to_class */
} csaf_bias_entry;

typedef struct csaf_synth_params {
  uint64_t seed;
  size_t classifier_count;
  const char* const* class_names;
  size_t class_count;
  const char* const* severity_names; /* NULL = class order */
  size_t n_val;
  size_t n_test;
  double accuracy_lo;
  double accuracy_hi;
  double sharpness_correct;
  double sharpness_wrong;
  const csaf_bias_entry* bias;
  size_t bias_count;
} csaf_synth_params;

CSAF_API void csaf_synth_params_init(csaf_synth_params* params);
/* Writes manifest.json plus prediction/label CSVs; loadable via csaf_pool_load. */
CSAF_API csaf_status csaf_synth_write(const csaf_synth_params* params, const char* out_dir);
CSAF_API csaf_status csaf_synth_create_pool(const csaf_synth_params* params, csaf_pool** out);

/* ---- fusion engines ----------------------------------------------------- */

/* costmat is required for CS_AF and must be NULL otherwise; AF derives its
 * objective weights with the uniform cost matrix. Active methods need a
 * labeled validation split. alpha blends objective and subjective weights
 * (0.5 = plain average). */
CSAF_API csaf_status csaf_engine_create(const csaf_pool* pool, csaf_method method,
                                        const csaf_costmat* costmat, double alpha,
                                        csaf_engine** out);
CSAF_API csaf_status csaf_engine_objective_weight(const csaf_engine* engine, size_t classifier,
                                                  double* out);
CSAF_API void csaf_engine_free(csaf_engine* engine);

/* ---- evaluation --------------------------------------------------------- */

/* Fuses the pool's test split. report_costs (may be NULL when count is 0)
 * price the confusion matrix for total-cost metrics; metrics require test
 * labels, predictions do not. */
CSAF_API csaf_status csaf_evaluate(const csaf_engine* engine, const csaf_pool* pool,
                                   const csaf_costmat* const* report_costs, size_t cost_count,
                                   csaf_eval** out);
CSAF_API size_t csaf_eval_sample_count(const csaf_eval* eval);
CSAF_API csaf_status csaf_eval_prediction(const csaf_eval* eval, size_t sample, size_t* out);
CSAF_API csaf_status csaf_eval_accuracy(const csaf_eval* eval, double* out);
CSAF_API csaf_status csaf_eval_total_cost(const csaf_eval* eval, size_t cost_index, double* out);
CSAF_API csaf_status csaf_eval_save_report(const csaf_eval* eval, const char* path,
                                           csaf_report_format format);
CSAF_API csaf_status csaf_eval_save_predictions(const csaf_eval* eval, const char* path);
CSAF_API void csaf_eval_free(csaf_eval* eval);

/* ---- random-subset experiments ------------------------------------------ */

typedef struct csaf_contestant {
  csaf_method method;
  int cost_index; /* index into the costs array for CS_AF; -1 otherwise */
} csaf_contestant;

/* Runs the paired random-subset protocol: per (subset size, repetition) a
 * seeded without-replacement subset is drawn once and scored by every
 * contestant. costs serve both as CS_AF objective matrices (via cost_index)
 * and as total-cost report matrices. threads 0 = machine parallelism. */
CSAF_API csaf_status csaf_experiment_run(const csaf_pool* pool,
                                         const csaf_contestant* contestants,
                                         size_t contestant_count,
                                         const size_t* subset_sizes, size_t size_count,
                                         size_t repetitions, uint64_t seed,
                                         const csaf_costmat* const* costs, size_t cost_count,
                                         double alpha, unsigned threads,
                                         csaf_experiment** out);
CSAF_API csaf_status csaf_experiment_accuracy(const csaf_experiment* experiment,
                                              size_t contestant, size_t size_index,
                                              double* mean, double* stddev);
CSAF_API csaf_status csaf_experiment_total_cost(const csaf_experiment* experiment,
                                                size_t contestant, size_t size_index,
                                                size_t cost_index, double* mean,
                                                double* stddev);
/* Mean per-class sensitivity pooled over every (size, repetition) pair. */
CSAF_API csaf_status csaf_experiment_pooled_sensitivity(const csaf_experiment* experiment,
                                                        size_t contestant, size_t class_index,
                                                        double* out);
/* Writes experiment.json, curves.csv and per_class.csv into the directory. */
CSAF_API csaf_status csaf_experiment_save(const csaf_experiment* experiment,
                                          const char* out_dir);
CSAF_API void csaf_experiment_free(csaf_experiment* experiment);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CSAF_H */
