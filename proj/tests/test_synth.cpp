#include "synth.hpp"

#include "doctest.h"
#include "helpers.hpp"
#include "rng.hpp"
#include "weights.hpp"

using namespace csaf;

namespace {

SyntheticPoolSpec base_spec() {
  SyntheticPoolSpec spec;
  spec.seed = 99;
  spec.classifiers = 4;
  spec.schema = test::small_schema(8);
  spec.n_val = 200;
  spec.n_test = 400;
  return spec;
}

double empirical_accuracy(const PredictionSet& split, std::size_t classifier) {
  std::size_t hits = 0;
  for (std::size_t s = 0; s < split.sample_count(); ++s)
    if (argmax_index(split.decision(classifier, s)) == (*split.labels)[s]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(split.sample_count());
}

}  // namespace

TEST_CASE("substream sampling") {
  rng::SplitMix64 stream(rng::substream(7, {11, 16, 3}));
  const auto subset = rng::sample_without_replacement(stream, 96, 16);
  CHECK(subset.size() == 16);
  CHECK(std::is_sorted(subset.begin(), subset.end()));
  CHECK(std::adjacent_find(subset.begin(), subset.end()) == subset.end());
  for (std::size_t idx : subset) CHECK(idx < 96);

  rng::SplitMix64 again(rng::substream(7, {11, 16, 3}));
  CHECK(rng::sample_without_replacement(again, 96, 16) == subset);

  rng::SplitMix64 other(rng::substream(8, {11, 16, 3}));
  CHECK(rng::sample_without_replacement(other, 96, 16) != subset);
}

TEST_CASE("generation is reproducible bit for bit") {
  const SyntheticPoolSpec spec = base_spec();
  const SyntheticPool a = generate_pool(spec);
  const SyntheticPool b = generate_pool(spec);
  CHECK(a.classifier_accuracy == b.classifier_accuracy);
  CHECK(a.validation.labels == b.validation.labels);
  CHECK(a.test.predictions == b.test.predictions);
  CHECK(a.test.sample_ids == b.test.sample_ids);

  SyntheticPoolSpec reseeded = spec;
  reseeded.seed = 100;
  CHECK(generate_pool(reseeded).test.predictions != a.test.predictions);
}

TEST_CASE("decision vectors are strictly valid") {
  const SyntheticPool pool = generate_pool(base_spec());
  for (const PredictionSet* split : {&pool.validation, &pool.test}) {
    for (std::size_t c = 0; c < split->classifier_count(); ++c)
      for (std::size_t s = 0; s < split->sample_count(); ++s)
        CHECK_FALSE(validate_decision_vector(split->decision(c, s), kStrictTolerance));
  }
}

TEST_CASE("forced-correct limit reaches full accuracy") {
  SyntheticPoolSpec spec = base_spec();
  spec.accuracy_lo = spec.accuracy_hi = 0.999999;
  spec.sharpness_correct = 1e6;
  spec.n_val = 50;
  spec.n_test = 100;
  const SyntheticPool pool = generate_pool(spec);
  for (std::size_t c = 0; c < spec.classifiers; ++c)
    CHECK(empirical_accuracy(pool.test, c) == 1.0);
}

TEST_CASE("empirical accuracy tracks the drawn target") {
  SyntheticPoolSpec spec = base_spec();
  spec.accuracy_lo = spec.accuracy_hi = 0.7;
  spec.sharpness_correct = 3.0;
  spec.n_val = 10;
  spec.n_test = 10000;
  const SyntheticPool pool = generate_pool(spec);
  for (std::size_t c = 0; c < spec.classifiers; ++c) {
    CHECK(pool.classifier_accuracy[c] == 0.7);
    CHECK(empirical_accuracy(pool.test, c) == doctest::Approx(0.7).epsilon(0.03));
  }
}

TEST_CASE("confidence separates correct from wrong predictions") {
  SyntheticPoolSpec spec = base_spec();
  spec.sharpness_correct = 4.0;
  spec.sharpness_wrong = 1.5;
  spec.n_test = 4000;
  const SyntheticPool pool = generate_pool(spec);
  double sum_correct = 0.0, sum_wrong = 0.0;
  std::size_t n_correct = 0, n_wrong = 0;
  for (std::size_t c = 0; c < spec.classifiers; ++c) {
    for (std::size_t s = 0; s < pool.test.sample_count(); ++s) {
      const auto vec = pool.test.decision(c, s);
      const double i = individuality(vec);
      if (argmax_index(vec) == (*pool.test.labels)[s]) {
        sum_correct += i;
        ++n_correct;
      } else {
        sum_wrong += i;
        ++n_wrong;
      }
    }
  }
  REQUIRE(n_correct > 0);
  REQUIRE(n_wrong > 0);
  CHECK(sum_correct / n_correct > sum_wrong / n_wrong);
}

TEST_CASE("confusion bias injects targeted errors") {
  SyntheticPoolSpec spec = base_spec();
  spec.accuracy_lo = spec.accuracy_hi = 0.8;
  spec.n_test = 8000;
  spec.confusion_bias = {{0, 0, 7, 0.5}};
  const SyntheticPool pool = generate_pool(spec);

  auto targeted_rate = [&](std::size_t classifier) {
    std::size_t from_count = 0, redirected = 0;
    for (std::size_t s = 0; s < pool.test.sample_count(); ++s) {
      if ((*pool.test.labels)[s] != 0) continue;
      ++from_count;
      if (argmax_index(pool.test.decision(classifier, s)) == 7) ++redirected;
    }
    return static_cast<double>(redirected) / static_cast<double>(from_count);
  };
  // biased classifier funnels about half of class 0 into class 7; an
  // unbiased one only reaches it through the uniform wrong-class pick
  CHECK(targeted_rate(0) > 0.4);
  CHECK(targeted_rate(1) < 0.15);
}

TEST_CASE("spec validation") {
  SyntheticPoolSpec spec = base_spec();
  SUBCASE("accuracy range") {
    spec.accuracy_lo = 0.9;
    spec.accuracy_hi = 0.8;
    CHECK_THROWS_AS(generate_pool(spec), Error);
    spec.accuracy_lo = 0.0;
    CHECK_THROWS_AS(generate_pool(spec), Error);
  }
  SUBCASE("sharpness") {
    spec.sharpness_wrong = 0.0;
    CHECK_THROWS_AS(generate_pool(spec), Error);
  }
  SUBCASE("bias bounds") {
    spec.confusion_bias = {{9, 0, 7, 0.2}};
    CHECK_THROWS_AS(generate_pool(spec), Error);
    spec.confusion_bias = {{0, 3, 3, 0.2}};
    CHECK_THROWS_AS(generate_pool(spec), Error);
    spec.confusion_bias = {{0, 0, 7, 1.0}};
    CHECK_THROWS_AS(generate_pool(spec), Error);
    spec.confusion_bias = {{0, 0, 7, 0.2}, {0, 0, 6, 0.1}};
    CHECK_THROWS_AS(generate_pool(spec), Error);
  }
  SUBCASE("empty pool") {
    spec.classifiers = 0;
    CHECK_THROWS_AS(generate_pool(spec), Error);
  }
}

TEST_CASE("labels cover every class") {
  const SyntheticPool pool = generate_pool(base_spec());
  std::vector<std::size_t> counts(8, 0);
  for (std::size_t label : *pool.test.labels) ++counts[label];
  for (std::size_t count : counts) CHECK(count > 0);
}
