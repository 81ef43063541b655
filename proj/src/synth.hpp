#pragma once

#include <cstdint>

#include "types.hpp"

namespace csaf {

/// Directs part of one classifier's error mass into a specific cell: when the
/// true class is from_class, an extra_error-sized slice of its predictions is
/// forced to to_class before the usual accuracy draw.
struct BiasEntry {
  std::size_t classifier = 0;
  std::size_t from_class = 0;
  std::size_t to_class = 0;
  double extra_error = 0.0;
};

/// Seeded stand-in for a pool of trained classifiers. Decision vectors are
/// sharper when the drawn target class is correct than when it is wrong
/// (sharpness_correct vs sharpness_wrong), so confidence carries signal about
/// correctness -- the regime in which per-sample weighting can help.
struct SyntheticPoolSpec {
  std::uint64_t seed = 0;
  std::size_t classifiers = 0;
  ClassSchema schema;
  std::size_t n_val = 0;
  std::size_t n_test = 0;
  double accuracy_lo = 0.7;
  double accuracy_hi = 0.9;
  double sharpness_correct = 4.0;
  double sharpness_wrong = 1.5;
  std::vector<BiasEntry> confusion_bias;

  void validate() const;
};

struct SyntheticPool {
  PredictionSet validation;
  PredictionSet test;
  std::vector<double> classifier_accuracy;  // drawn per-classifier targets
};

// Fully determined by the seed. Every random quantity comes from its own
// substream keyed on (seed, role, classifier, split, sample), so output is
// independent of generation order and parallelism.
SyntheticPool generate_pool(const SyntheticPoolSpec& spec);

}  // namespace csaf
