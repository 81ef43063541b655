#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csaf {

enum class errc {
  invalid_argument,
  validation,
  parse,
  io,
  dimension_mismatch,
  unsupported,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] void fail(errc code, const std::string& message);

// Probability-row tolerance on ingestion; post-renormalization rows must be
// tight to kStrictTolerance.
inline constexpr double kIngestTolerance = 1e-6;
inline constexpr double kStrictTolerance = 1e-12;

/// Ordered class labels plus a severity ranking (rank 0 = most severe).
struct ClassSchema {
  std::vector<std::string> names;
  std::vector<std::size_t> severity_rank;  // severity_rank[class index]

  // severity_order lists class names from most to least severe; empty means
  // the listing order of `names` is already the severity order.
  static ClassSchema create(std::vector<std::string> names,
                            const std::vector<std::string>& severity_order = {});

  std::size_t size() const { return names.size(); }
  std::optional<std::size_t> find(const std::string& name) const;

  // class index at each severity rank (inverse of severity_rank)
  std::vector<std::size_t> classes_by_severity() const;
  ClassSchema reversed_severity() const;

  bool operator==(const ClassSchema&) const = default;
};

/// One classifier's posterior vector for one sample.
using DecisionVector = std::vector<double>;

// nullopt when valid: entries in [0,1] and |sum - 1| <= tolerance.
std::optional<std::string> validate_decision_vector(std::span<const double> v,
                                                    double tolerance = kIngestTolerance);

// Divides by the sum. Requires non-negative entries and a positive sum.
DecisionVector renormalize(std::span<const double> v);

std::size_t argmax_index(std::span<const double> values);  // lowest index wins ties

/// k x m posterior matrix for a single sample, one row per classifier.
struct DecisionMatrix {
  std::size_t classifiers = 0;
  std::size_t classes = 0;
  std::vector<double> values;  // row-major

  static DecisionMatrix create(std::size_t classifiers, std::size_t classes);
  static DecisionMatrix from_rows(const std::vector<DecisionVector>& rows);

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * classes, classes};
  }
  std::span<double> row(std::size_t i) {
    return {values.data() + i * classes, classes};
  }
};

/// m x m positive cost table; cell (p, q) prices predicting true class p as q.
struct CostMatrix {
  std::size_t classes = 0;
  std::vector<double> cells;  // row-major

  // Validates positivity and that each diagonal entry is <= every
  // off-diagonal entry of its row.
  static CostMatrix create(std::size_t classes, std::vector<double> cells);

  double at(std::size_t p, std::size_t q) const { return cells[p * classes + q]; }

  bool operator==(const CostMatrix&) const = default;
};

/// m x m table of counts (or cost-weighted values); row = true class,
/// column = predicted class.
struct ConfusionMatrix {
  std::size_t classes = 0;
  std::vector<double> cells;  // row-major

  static ConfusionMatrix zeros(std::size_t classes);
  static ConfusionMatrix create(std::size_t classes, std::vector<double> cells);

  double at(std::size_t p, std::size_t q) const { return cells[p * classes + q]; }
  double& at(std::size_t p, std::size_t q) { return cells[p * classes + q]; }

  double trace() const;
  double total() const;
  double row_sum(std::size_t p) const;
  double col_sum(std::size_t q) const;

  bool operator==(const ConfusionMatrix&) const = default;
};

/// Per-classifier weights, one entry per pool member.
using WeightVector = std::vector<double>;

/// Aligned predictions of a classifier pool over one split. Every classifier
/// covers the same samples in the same order.
struct PredictionSet {
  std::vector<std::string> sample_ids;
  std::optional<std::vector<std::size_t>> labels;  // true class per sample
  std::size_t classes = 0;
  std::vector<std::vector<double>> predictions;  // per classifier, flat n x m

  std::size_t classifier_count() const { return predictions.size(); }
  std::size_t sample_count() const { return sample_ids.size(); }

  std::span<const double> decision(std::size_t classifier, std::size_t sample) const {
    return {predictions[classifier].data() + sample * classes, classes};
  }
  DecisionMatrix decision_matrix(std::size_t sample) const;
  // Gather a subset of classifiers (used by the subset experiments).
  void gather(std::span<const std::size_t> classifier_subset, std::size_t sample,
              DecisionMatrix& out) const;

  void validate() const;
};

/// A loaded (or generated) pool: schema, classifier ids, and the aligned
/// validation and test splits. Immutable after assembly.
struct ClassifierPool {
  ClassSchema schema;
  std::vector<std::string> classifier_ids;
  PredictionSet validation;
  PredictionSet test;
  std::vector<std::string> warnings;  // non-fatal ingestion notes

  std::size_t classifier_count() const { return classifier_ids.size(); }
};

}  // namespace csaf
