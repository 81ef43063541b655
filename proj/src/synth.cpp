#include "synth.hpp"

#include <cmath>

#include "rng.hpp"

namespace csaf {

namespace {

// Substream roles; see generate_pool's determinism contract.
enum : std::uint64_t { kRoleLabel = 1, kRoleAccuracy = 2, kRoleDecision = 3 };

std::vector<std::size_t> draw_labels(std::uint64_t seed, std::uint64_t split,
                                     std::size_t n, std::size_t m) {
  std::vector<std::size_t> labels(n);
  for (std::size_t s = 0; s < n; ++s) {
    rng::SplitMix64 stream(rng::substream(seed, {kRoleLabel, split, s}));
    labels[s] = static_cast<std::size_t>(stream.next_below(m));
  }
  return labels;
}

std::vector<std::string> sample_ids(const char* prefix, std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::string id = std::to_string(s);
    ids.push_back(std::string(prefix) + "_" + std::string(6 - std::min<std::size_t>(6, id.size()), '0') + id);
  }
  return ids;
}

}  // namespace

void SyntheticPoolSpec::validate() const {
  if (classifiers == 0) fail(errc::validation, "synthetic pool needs at least one classifier");
  if (schema.size() < 2) fail(errc::validation, "synthetic pool needs at least two classes");
  if (!(accuracy_lo > 0.0 && accuracy_lo <= accuracy_hi && accuracy_hi < 1.0))
    fail(errc::validation, "accuracy range must satisfy 0 < lo <= hi < 1");
  if (!(sharpness_correct > 0.0) || !(sharpness_wrong > 0.0))
    fail(errc::validation, "sharpness values must be positive");
  for (const auto& bias : confusion_bias) {
    if (bias.classifier >= classifiers) fail(errc::validation, "bias names unknown classifier");
    if (bias.from_class >= schema.size() || bias.to_class >= schema.size())
      fail(errc::validation, "bias names unknown class");
    if (bias.from_class == bias.to_class)
      fail(errc::validation, "bias must redirect to a different class");
    if (!(bias.extra_error >= 0.0 && bias.extra_error < 1.0))
      fail(errc::validation, "bias extra error must lie in [0,1)");
    for (const auto& other : confusion_bias) {
      if (&other != &bias && other.classifier == bias.classifier &&
          other.from_class == bias.from_class)
        fail(errc::validation, "multiple bias entries for one (classifier, class) pair");
    }
  }
}

SyntheticPool generate_pool(const SyntheticPoolSpec& spec) {
  spec.validate();
  const std::size_t m = spec.schema.size();
  const std::size_t k = spec.classifiers;

  SyntheticPool pool;
  pool.classifier_accuracy.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    rng::SplitMix64 stream(rng::substream(spec.seed, {kRoleAccuracy, c}));
    pool.classifier_accuracy[c] =
        spec.accuracy_lo + stream.next_unit() * (spec.accuracy_hi - spec.accuracy_lo);
  }

  // bias lookup per (classifier, true class)
  std::vector<double> bias_extra(k * m, 0.0);
  std::vector<std::size_t> bias_target(k * m, 0);
  for (const auto& bias : spec.confusion_bias) {
    bias_extra[bias.classifier * m + bias.from_class] = bias.extra_error;
    bias_target[bias.classifier * m + bias.from_class] = bias.to_class;
  }

  for (std::uint64_t split = 0; split < 2; ++split) {
    PredictionSet& out = split == 0 ? pool.validation : pool.test;
    const std::size_t n = split == 0 ? spec.n_val : spec.n_test;
    out.classes = m;
    out.sample_ids = sample_ids(split == 0 ? "val" : "test", n);
    out.labels = draw_labels(spec.seed, split, n, m);
    out.predictions.assign(k, std::vector<double>(n * m, 0.0));

    for (std::size_t c = 0; c < k; ++c) {
      std::vector<double>& block = out.predictions[c];
      for (std::size_t s = 0; s < n; ++s) {
        rng::SplitMix64 stream(rng::substream(spec.seed, {kRoleDecision, c, split, s}));
        // fixed draw order: bias, accuracy, wrong-class pick, then m noise terms
        const double u_bias = stream.next_unit();
        const double u_acc = stream.next_unit();
        const double u_wrong = stream.next_unit();

        const std::size_t truth = (*out.labels)[s];
        std::size_t target;
        if (u_bias < bias_extra[c * m + truth]) {
          target = bias_target[c * m + truth];
        } else if (u_acc < pool.classifier_accuracy[c]) {
          target = truth;
        } else {
          std::size_t pick = static_cast<std::size_t>(u_wrong * static_cast<double>(m - 1));
          if (pick >= m - 1) pick = m - 2;
          target = pick < truth ? pick : pick + 1;
        }

        const double boost = target == truth ? spec.sharpness_correct : spec.sharpness_wrong;
        double* vec = block.data() + s * m;
        double sum = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
          vec[l] = stream.next_unit() + (l == target ? boost : 0.0);
          sum += vec[l];
        }
        for (std::size_t l = 0; l < m; ++l) vec[l] /= sum;
      }
    }
    out.validate();
  }
  return pool;
}

}  // namespace csaf
