// Acceptance suite: exercises the end-to-end guarantees on seeded synthetic
// pools and prints one pass/fail line per criterion. Exits nonzero if any
// criterion fails. The CLI binary and the canonical cost-matrix fixtures are
// injected at build time via CSAF_CLI_PATH / CSAF_DATA_DIR.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "costmat.hpp"
#include "dataio.hpp"
#include "fusion.hpp"
#include "harness.hpp"
#include "metrics.hpp"
#include "synth.hpp"
#include "types.hpp"
#include "weights.hpp"

using namespace csaf;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ClassSchema lesion_schema() {
  return ClassSchema::create({"MEL", "SCC", "BCC", "NV", "AK", "DF", "VASC", "BKL"});
}

ClassifierPool wrap_pool(const SyntheticPoolSpec& spec) {
  SyntheticPool generated = generate_pool(spec);
  ClassifierPool pool;
  pool.schema = spec.schema;
  pool.classifier_ids = default_classifier_ids(spec.classifiers);
  pool.validation = std::move(generated.validation);
  pool.test = std::move(generated.test);
  return pool;
}

// the canonical pool of criteria 5 and 6 (criterion 6 adds the bias entries)
SyntheticPoolSpec canonical_spec(std::uint64_t seed) {
  SyntheticPoolSpec spec;
  spec.seed = seed;
  spec.classifiers = 48;
  spec.schema = lesion_schema();
  spec.n_val = 2000;
  spec.n_test = 4000;
  spec.accuracy_lo = 0.55;
  spec.accuracy_hi = 0.85;
  spec.sharpness_correct = 4.0;
  spec.sharpness_wrong = 1.5;
  return spec;
}

std::vector<std::size_t> predictions_of(const FusionEngine& engine, const PredictionSet& split) {
  std::vector<std::size_t> out;
  for (const auto& decision : predict_batch(engine, split))
    out.push_back(decision.predicted_class);
  return out;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<unreadable:" + path.string() + ">";
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_cli(const std::string& args) {
  const std::string command = std::string(CSAF_CLI_PATH) + " " + args;
  return std::system(command.c_str());
}

struct ScratchDir {
  std::filesystem::path path;
  explicit ScratchDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("csaf_accept_" + tag);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

// ---------------------------------------------------------------------------
// 1. individuality matches its closed form on 10,000 random vectors
// ---------------------------------------------------------------------------
bool criterion_individuality(std::string& detail) {
  const auto start = Clock::now();
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t m = 2 + gen() % 15;  // m in 2..16
    DecisionVector v(m);
    double sum = 0.0;
    for (double& x : v) {
      x = unit(gen) + 1e-12;
      sum += x;
    }
    for (double& x : v) x /= sum;
    const double peak = *std::max_element(v.begin(), v.end());
    const double closed = (static_cast<double>(m) * peak - 1.0) / static_cast<double>(m - 1);
    worst = std::max(worst, std::abs(individuality(v) - closed));
    if (worst > 1e-12) break;
  }

  bool exact_endpoints = true;
  for (std::size_t m = 2; m <= 16; ++m) {
    const DecisionVector uniform(m, 1.0 / static_cast<double>(m));
    DecisionVector one_hot(m, 0.0);
    one_hot[m / 2] = 1.0;
    exact_endpoints &= individuality(uniform) == 0.0;
    exact_endpoints &= individuality(one_hot) == 1.0;
  }

  const double elapsed = seconds_since(start);
  std::ostringstream s;
  s << "max |sum - closed form| = " << worst << ", endpoints "
    << (exact_endpoints ? "exact" : "WRONG") << ", " << elapsed << " s";
  detail = s.str();
  return worst <= 1e-12 && exact_endpoints && elapsed < 1.0;
}

// ---------------------------------------------------------------------------
// 2. reduction chain: cs-af(uniform) == af; equalized af == average; k=1
// ---------------------------------------------------------------------------
bool criterion_reduction_chain(std::string& detail) {
  SyntheticPoolSpec spec = canonical_spec(1042);
  spec.classifiers = 16;
  spec.n_val = 1000;
  spec.n_test = 1000;
  const ClassifierPool pool = wrap_pool(spec);
  const CostMatrix ones = uniform_cost_matrix(8);

  std::size_t mismatches_a = 0, mismatches_b = 0, mismatches_c = 0;

  // (a) cs-af with the uniform cost matrix equals af, sample for sample
  {
    const EngineBuild af = build_engine(pool, FusionMethod::af, nullptr, "", 0.5);
    const EngineBuild cs = build_engine(pool, FusionMethod::cs_af, &ones, "ones", 0.5);
    const auto p_af = predictions_of(af.engine, pool.test);
    const auto p_cs = predictions_of(cs.engine, pool.test);
    for (std::size_t s = 0; s < p_af.size(); ++s) mismatches_a += p_af[s] != p_cs[s];
  }

  // (b) equal objective weights + identical rows per classifier: af == average
  {
    PredictionSet cloned = pool.test;
    for (std::size_t c = 1; c < cloned.classifier_count(); ++c)
      cloned.predictions[c] = cloned.predictions[0];
    const auto af = FusionEngine::make_active(FusionMethod::af, pool.schema,
                                              WeightVector(16, 0.7), 0.5);
    const auto avg = FusionEngine::make_static(FusionMethod::average, pool.schema);
    const auto p_af = predictions_of(af, cloned);
    const auto p_avg = predictions_of(avg, cloned);
    for (std::size_t s = 0; s < p_af.size(); ++s) mismatches_b += p_af[s] != p_avg[s];
  }

  // (c) a single classifier collapses all four methods
  {
    ClassifierPool solo = pool;
    solo.classifier_ids = {pool.classifier_ids[0]};
    solo.validation.predictions = {pool.validation.predictions[0]};
    solo.test.predictions = {pool.test.predictions[0]};
    const CostMatrix cost_a = build_cost_matrix(CostMatrixSpec::defaults(pool.schema));

    const auto p_mv = predictions_of(
        build_engine(solo, FusionMethod::max_voting, nullptr, "", 0.5).engine, solo.test);
    const auto p_avg = predictions_of(
        build_engine(solo, FusionMethod::average, nullptr, "", 0.5).engine, solo.test);
    const auto p_af = predictions_of(
        build_engine(solo, FusionMethod::af, nullptr, "", 0.5).engine, solo.test);
    const auto p_cs = predictions_of(
        build_engine(solo, FusionMethod::cs_af, &cost_a, "A", 0.5).engine, solo.test);
    for (std::size_t s = 0; s < p_mv.size(); ++s) {
      mismatches_c += p_mv[s] != p_avg[s];
      mismatches_c += p_mv[s] != p_af[s];
      mismatches_c += p_mv[s] != p_cs[s];
    }
  }

  std::ostringstream s;
  s << "mismatches: cs-af(uniform) vs af " << mismatches_a << ", equalized af vs average "
    << mismatches_b << ", k=1 " << mismatches_c << " (1000 samples each)";
  detail = s.str();
  return mismatches_a == 0 && mismatches_b == 0 && mismatches_c == 0;
}

// ---------------------------------------------------------------------------
// 3. metrics match independent per-sample brute-force tallies
// ---------------------------------------------------------------------------
bool criterion_metric_oracles(std::string& detail) {
  std::mt19937_64 gen(3);
  double worst = 0.0;
  bool f1_identity = true;

  for (int instance = 0; instance < 100; ++instance) {
    const std::size_t n = 1 + gen() % 200;
    const std::size_t m = 2 + gen() % 7;
    std::vector<std::size_t> truth(n), pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = gen() % m;
      pred[i] = gen() % m;
    }
    std::vector<double> cost_cells(m * m);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q)
        cost_cells[p * m + q] = p == q ? 1.0 : static_cast<double>(16 + gen() % 185);
    const CostMatrix cost = CostMatrix::create(m, cost_cells);

    // independent tallies, one pass over the samples
    std::vector<double> counts(m * m, 0.0);
    double correct = 0.0, cost_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      counts[truth[i] * m + pred[i]] += 1.0;
      correct += truth[i] == pred[i] ? 1.0 : 0.0;
      cost_sum += cost.at(truth[i], pred[i]);
    }

    const ConfusionMatrix cm = confusion_matrix(pred, truth, m);
    for (std::size_t i = 0; i < m * m; ++i)
      worst = std::max(worst, std::abs(cm.cells[i] - counts[i]));
    worst = std::max(worst, std::abs(accuracy(cm) - correct / static_cast<double>(n)));
    worst = std::max(worst, std::abs(total_cost(cm, cost) - cost_sum));

    double trace = 0.0, total = 0.0;
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = 0; q < m; ++q) {
        const double weighted = counts[p * m + q] * cost.at(p, q);
        total += weighted;
        if (p == q) trace += weighted;
      }
    worst = std::max(worst, std::abs(micro_f1(cost_adjust(cm, cost)) - trace / total));
    f1_identity &= micro_f1(cost_adjust(cm, uniform_cost_matrix(m))) == accuracy(cm);

    for (std::size_t cls = 0; cls < m; ++cls) {
      double tp = 0, fp = 0, tn = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool actual = truth[i] == cls, called = pred[i] == cls;
        tp += actual && called;
        fp += !actual && called;
        fn += actual && !called;
        tn += !actual && !called;
      }
      const auto sens = sensitivity(cm, cls);
      if (tp + fn == 0) {
        if (sens) {
          detail = "sensitivity defined on an empty class";
          return false;
        }
      } else {
        worst = std::max(worst, std::abs(*sens - tp / (tp + fn)));
      }
      const auto spec = specificity(cm, cls);
      if (tn + fp == 0) {
        if (spec) {
          detail = "specificity defined with no negatives";
          return false;
        }
      } else {
        worst = std::max(worst, std::abs(*spec - tn / (tn + fp)));
      }
    }
  }

  std::ostringstream s;
  s << "100 instances, max |library - brute force| = " << worst
    << ", uniform-cost micro-F1 == accuracy " << (f1_identity ? "exact" : "VIOLATED");
  detail = s.str();
  return worst <= 1e-12 && f1_identity;
}

// ---------------------------------------------------------------------------
// 4. cost-matrix construction invariants and anchor values
// ---------------------------------------------------------------------------
bool criterion_cost_matrix(std::string& detail) {
  const ClassSchema schema = lesion_schema();
  CostMatrixSpec spec = CostMatrixSpec::defaults(schema);
  const CostMatrix a = build_cost_matrix(spec);
  spec.schema = schema.reversed_severity();
  const CostMatrix b = build_cost_matrix(spec);

  bool ok = true;
  ok &= a.at(0, 0) == 1.0;  // correct MEL
  ok &= a.at(7, 7) == 8.0;  // correct BKL
  ok &= raw_offdiagonal(1.0, 8.0) == 64.0;
  ok &= a.at(0, 7) == 200.0;  // raw maximum lands on the upper endpoint
  ok &= a.at(7, 0) == 16.0;   // raw minimum lands on the lower endpoint

  bool integers = true, principle4 = true, mirror = true;
  for (std::size_t p = 0; p < 8; ++p) {
    for (std::size_t q = 0; q < 8; ++q) {
      if (p != q) integers &= a.at(p, q) == std::floor(a.at(p, q));
      principle4 &= a.at(p, p) <= a.at(p, q);
      mirror &= b.at(p, q) == a.at(7 - p, 7 - q);
    }
  }
  ok &= integers && principle4 && mirror;

  std::ostringstream s;
  s << "anchors c(MEL,MEL)=" << a.at(0, 0) << " c(BKL,BKL)=" << a.at(7, 7)
    << " raw(MEL->BKL)=" << raw_offdiagonal(1.0, 8.0) << " scaled extremes " << a.at(7, 0)
    << "/" << a.at(0, 7) << "; integers " << (integers ? "yes" : "NO") << ", principle-4 "
    << (principle4 ? "holds" : "VIOLATED") << ", severity mirror "
    << (mirror ? "holds" : "VIOLATED");
  detail = s.str();
  return ok;
}

// ---------------------------------------------------------------------------
// 5. accuracy trend on the canonical pool
// ---------------------------------------------------------------------------
bool criterion_accuracy_trend(std::string& detail) {
  const auto start = Clock::now();
  const ClassifierPool pool = wrap_pool(canonical_spec(42));

  ExperimentConfig config;
  config.contestants = {{FusionMethod::max_voting, -1, "max-voting"},
                        {FusionMethod::average, -1, "average"},
                        {FusionMethod::af, -1, "af"}};
  config.subset_sizes = {8, 16, 32};
  config.repetitions = 100;
  config.seed = 42;
  const ExperimentReport report = run_subset_experiment(pool, {}, {}, config);

  bool dominance = true, monotone = true;
  for (std::size_t s = 0; s < 3; ++s) {
    const double mv = report.cells[0][s].accuracy.mean;
    const double avg = report.cells[1][s].accuracy.mean;
    const double af = report.cells[2][s].accuracy.mean;
    dominance &= af >= avg - 0.002;
    dominance &= af >= mv - 0.002;
  }
  for (std::size_t c = 0; c < 3; ++c)
    monotone &= report.cells[c][2].accuracy.mean >= report.cells[c][0].accuracy.mean;

  const double elapsed = seconds_since(start);
  std::ostringstream s;
  s << "af/avg/mv accuracy at N=8: " << report.cells[2][0].accuracy.mean << "/"
    << report.cells[1][0].accuracy.mean << "/" << report.cells[0][0].accuracy.mean
    << ", dominance " << (dominance ? "holds" : "VIOLATED") << ", N=32 >= N=8 "
    << (monotone ? "holds" : "VIOLATED") << ", " << elapsed << " s";
  detail = s.str();
  return dominance && monotone && elapsed < 120.0;
}

// ---------------------------------------------------------------------------
// 6. cost trend and severe-class sensitivity on the biased pool
// ---------------------------------------------------------------------------
bool criterion_cost_trend(std::string& detail) {
  const auto start = Clock::now();
  SyntheticPoolSpec spec = canonical_spec(43);
  // half the pool funnels part of its most-severe-class predictions into the
  // least severe class
  for (std::size_t c = 0; c < 24; ++c) spec.confusion_bias.push_back({c, 0, 7, 0.5});
  const ClassifierPool pool = wrap_pool(spec);

  const CostMatrix cost_a = build_cost_matrix(CostMatrixSpec::defaults(pool.schema));
  CostMatrixSpec spec_b = CostMatrixSpec::defaults(pool.schema.reversed_severity());
  const CostMatrix cost_b = build_cost_matrix(spec_b);

  ExperimentConfig config;
  config.contestants = {{FusionMethod::max_voting, -1, "max-voting"},
                        {FusionMethod::average, -1, "average"},
                        {FusionMethod::af, -1, "af"},
                        {FusionMethod::cs_af, 0, "cs-af(A)"},
                        {FusionMethod::cs_af, 1, "cs-af(B)"}};
  config.subset_sizes = {8, 16, 32};
  config.repetitions = 100;
  config.seed = 43;
  const ExperimentReport report =
      run_subset_experiment(pool, {cost_a, cost_b}, {"A", "B"}, config);

  constexpr double kSlack = 1.01;
  bool cost_dominance = true;
  for (std::size_t s = 0; s < 3; ++s) {
    const double cs_a = report.cells[3][s].total_cost[0].mean;
    const double cs_b = report.cells[4][s].total_cost[1].mean;
    for (std::size_t rival = 0; rival < 3; ++rival) {
      cost_dominance &= cs_a <= report.cells[rival][s].total_cost[0].mean * kSlack;
      cost_dominance &= cs_b <= report.cells[rival][s].total_cost[1].mean * kSlack;
    }
  }

  const auto sens_a = report.pooled_sensitivity(3, 0);
  const auto sens_b = report.pooled_sensitivity(4, 0);
  const bool severe_sensitivity = sens_a && sens_b && *sens_a >= *sens_b;

  const double elapsed = seconds_since(start);
  std::ostringstream s;
  s << "cost A at N=8 cs-af(A)/af/avg/mv: " << report.cells[3][0].total_cost[0].mean << "/"
    << report.cells[2][0].total_cost[0].mean << "/" << report.cells[1][0].total_cost[0].mean
    << "/" << report.cells[0][0].total_cost[0].mean << "; MEL sensitivity cs-af(A)="
    << (sens_a ? *sens_a : -1.0) << " cs-af(B)=" << (sens_b ? *sens_b : -1.0) << "; dominance "
    << (cost_dominance ? "holds" : "VIOLATED") << ", " << elapsed << " s";
  detail = s.str();
  return cost_dominance && severe_sensitivity && elapsed < 240.0;
}

// ---------------------------------------------------------------------------
// 7. determinism of the CLI and bit-stability of the formats
// ---------------------------------------------------------------------------
bool criterion_determinism(std::string& detail) {
  const ScratchDir scratch("det");
  const auto dir = scratch.path;

  // seeded synth runs write identical trees
  const std::string synth_args = "--seed 77 --k 8 --n-val 120 --n-test 200";
  if (run_cli("synth --out-dir " + (dir / "pool_a").string() + " " + synth_args) != 0 ||
      run_cli("synth --out-dir " + (dir / "pool_b").string() + " " + synth_args) != 0) {
    detail = "synth command failed";
    return false;
  }
  std::size_t files_compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "pool_a")) {
    const auto name = entry.path().filename();
    if (slurp(entry.path()) != slurp(dir / "pool_b" / name)) {
      detail = "synth outputs differ: " + name.string();
      return false;
    }
    ++files_compared;
  }

  // the experiment command is byte-reproducible under a fixed seed
  const std::string exp_args = " --manifest " + (dir / "pool_a" / "manifest.json").string() +
                               " --N 2,4 --reps 5 --seed 9 --cost-matrix " +
                               std::string(CSAF_DATA_DIR) + "/cost_matrix_a.csv";
  if (run_cli("experiment" + exp_args + " --out-dir " + (dir / "exp_a").string()) != 0 ||
      run_cli("experiment" + exp_args + " --threads 2 --out-dir " + (dir / "exp_b").string()) !=
          0) {
    detail = "experiment command failed";
    return false;
  }
  for (const char* name : {"experiment.json", "curves.csv", "per_class.csv"}) {
    if (slurp(dir / "exp_a" / name) != slurp(dir / "exp_b" / name)) {
      detail = std::string("experiment outputs differ: ") + name;
      return false;
    }
  }

  // prediction files round-trip through load/save byte for byte
  const ClassifierPool pool = load_pool(dir / "pool_a" / "manifest.json");
  save_predictions(dir / "roundtrip.csv", pool.schema, pool.test.sample_ids,
                   pool.test.predictions[0]);
  if (slurp(dir / "pool_a" / "c00_test.csv") != slurp(dir / "roundtrip.csv")) {
    detail = "prediction file round-trip changed bytes";
    return false;
  }

  // the committed cost-matrix fixtures are the tool's own output
  if (run_cli("costmat build --name A --out " + (dir / "a.csv").string()) != 0 ||
      run_cli("costmat build --reverse --name B --out " + (dir / "b.csv").string()) != 0) {
    detail = "costmat command failed";
    return false;
  }
  const std::string data_dir = CSAF_DATA_DIR;
  if (slurp(dir / "a.csv") != slurp(data_dir + "/cost_matrix_a.csv") ||
      slurp(dir / "b.csv") != slurp(data_dir + "/cost_matrix_b.csv")) {
    detail = "cost-matrix fixtures drifted from the builder output";
    return false;
  }

  // cs-af under the uniform cost matrix fuses exactly like af, end to end
  save_cost_matrix(dir / "uniform.csv", pool.schema.names,
                   uniform_cost_matrix(pool.schema.size()));
  const std::string manifest = (dir / "pool_a" / "manifest.json").string();
  if (run_cli("fuse --manifest " + manifest + " --method af --out " +
              (dir / "af.json").string() + " --predictions " + (dir / "af.csv").string()) != 0 ||
      run_cli("fuse --manifest " + manifest + " --method cs-af --cost-matrix " +
              (dir / "uniform.csv").string() + " --out " + (dir / "cs.json").string() +
              " --predictions " + (dir / "cs.csv").string()) != 0) {
    detail = "fuse command failed";
    return false;
  }
  if (slurp(dir / "af.csv") != slurp(dir / "cs.csv")) {
    detail = "cs-af(uniform) and af fuse to different predictions";
    return false;
  }
  const EvaluationReport fused = read_evaluation_report(dir / "af.json");  // valid JSON
  if (fused.method != "af" || fused.predicted.size() != 200) {
    detail = "fuse report content unexpected";
    return false;
  }

  // invalid severity list exits nonzero
  if (run_cli("costmat build --severity MEL,NV --out " + (dir / "bad.csv").string() +
              " 2>/dev/null") == 0) {
    detail = "costmat accepted a broken severity list";
    return false;
  }

  std::ostringstream s;
  s << "synth trees identical (" << files_compared
    << " files), experiment byte-reproducible across thread counts, cli fuse reduction exact, "
       "predictions and fixtures byte-stable";
  detail = s.str();
  return true;
}

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"closed-form individuality", criterion_individuality},
      {"reduction chain", criterion_reduction_chain},
      {"metric oracles", criterion_metric_oracles},
      {"cost-matrix construction", criterion_cost_matrix},
      {"accuracy trend", criterion_accuracy_trend},
      {"cost trend + severe-class sensitivity", criterion_cost_trend},
      {"determinism and formats", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %zu: %s -- %s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
