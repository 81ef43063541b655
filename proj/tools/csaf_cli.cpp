// Command-line front end over the csaf C API. Parsing only; every piece of
// fusion/metric logic lives behind the library.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csaf/csaf.h"

namespace {

constexpr const char* kDefaultClasses = "MEL,SCC,BCC,NV,AK,DF,VASC,BKL";
constexpr const char* kDefaultSubsetSizes = "8,16,24,32,40,48,56,64,72,80,88,96";

struct HandleDeleters {
  void operator()(csaf_schema* p) const { csaf_schema_free(p); }
  void operator()(csaf_costmat* p) const { csaf_costmat_free(p); }
  void operator()(csaf_pool* p) const { csaf_pool_free(p); }
  void operator()(csaf_engine* p) const { csaf_engine_free(p); }
  void operator()(csaf_eval* p) const { csaf_eval_free(p); }
  void operator()(csaf_experiment* p) const { csaf_experiment_free(p); }
};
template <typename T>
using Handle = std::unique_ptr<T, HandleDeleters>;

[[noreturn]] void die(csaf_status status) {
  std::fprintf(stderr, "error: %s: %s\n", csaf_status_name(status), csaf_last_error());
  std::exit(1);
}

void check(csaf_status status) {
  if (status != CSAF_OK) die(status);
}

std::vector<std::string> split_list(const std::string& text, char sep = ',') {
  std::vector<std::string> items;
  std::string item;
  for (char c : text) {
    if (c == sep) {
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) items.push_back(item);
  return items;
}

std::vector<const char*> c_strings(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  out.reserve(items.size());
  for (const auto& s : items) out.push_back(s.c_str());
  return out;
}

std::size_t parse_size(const std::string& token, const char* what) {
  try {
    return std::stoul(token);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(what) + ": not a number: '" + token + "'");
  }
}

double parse_real(const std::string& token, const char* what) {
  try {
    return std::stod(token);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string(what) + ": not a number: '" + token + "'");
  }
}

Handle<csaf_schema> make_schema(const std::string& classes, const std::string& severity) {
  const auto class_names = split_list(classes);
  const auto severity_names = split_list(severity);
  const auto class_ptrs = c_strings(class_names);
  const auto severity_ptrs = c_strings(severity_names);
  csaf_schema* schema = nullptr;
  check(csaf_schema_create(class_ptrs.data(), class_ptrs.size(),
                           severity_names.empty() ? nullptr : severity_ptrs.data(), &schema));
  return Handle<csaf_schema>(schema);
}

bool parse_method_name(const std::string& name, csaf_method* out) {
  if (name == "max-voting") *out = CSAF_METHOD_MAX_VOTING;
  else if (name == "average") *out = CSAF_METHOD_AVERAGE;
  else if (name == "af") *out = CSAF_METHOD_AF;
  else if (name == "cs-af") *out = CSAF_METHOD_CS_AF;
  else return false;
  return true;
}

std::size_t class_index_or_die(const csaf_schema* schema, const std::string& name) {
  for (std::size_t i = 0; i < csaf_schema_class_count(schema); ++i)
    if (name == csaf_schema_class_name(schema, i)) return i;
  std::fprintf(stderr, "error: unknown class '%s' in --bias\n", name.c_str());
  std::exit(1);
}

// idx or lo-hi range, then :FROM>TO:probability
csaf_bias_entry parse_bias_spec(const std::string& spec, const csaf_schema* schema,
                                std::size_t* range_lo, std::size_t* range_hi) {
  const auto parts = split_list(spec, ':');
  if (parts.size() != 3) {
    std::fprintf(stderr, "error: --bias expects idx[-idx]:FROM>TO:prob, got '%s'\n",
                 spec.c_str());
    std::exit(1);
  }
  const auto range = split_list(parts[0], '-');
  *range_lo = parse_size(range[0], "--bias classifier index");
  *range_hi = range.size() > 1 ? parse_size(range[1], "--bias classifier index") : *range_lo;
  const auto classes = split_list(parts[1], '>');
  if (classes.size() != 2) {
    std::fprintf(stderr, "error: --bias expects FROM>TO classes, got '%s'\n", parts[1].c_str());
    std::exit(1);
  }
  csaf_bias_entry entry{};
  entry.from_class = class_index_or_die(schema, classes[0]);
  entry.to_class = class_index_or_die(schema, classes[1]);
  entry.extra_error = parse_real(parts[2], "--bias probability");
  return entry;
}

void print_pool_warnings(const csaf_pool* pool) {
  for (std::size_t i = 0; const char* warning = csaf_pool_warning(pool, i); ++i)
    std::fprintf(stderr, "warning: %s\n", warning);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-sensitive active fusion of multi-classifier posteriors"};
  app.require_subcommand(1);

  // ---- costmat build ----
  auto* costmat_cmd = app.add_subcommand("costmat", "cost matrix utilities");
  costmat_cmd->require_subcommand(1);
  auto* build_cmd = costmat_cmd->add_subcommand("build", "build a severity-driven cost matrix");
  std::string cm_classes = kDefaultClasses, cm_severity, cm_out, cm_name;
  bool cm_reverse = false, cm_no_round = false;
  double cm_lo = 16.0, cm_hi = 200.0;
  build_cmd->add_option("--classes", cm_classes, "comma-separated class names (matrix order)");
  build_cmd->add_option("--severity", cm_severity,
                        "class names from most to least severe (default: --classes order)");
  build_cmd->add_option("--out", cm_out, "output CSV path")->required();
  build_cmd->add_flag("--reverse", cm_reverse, "reverse the severity order before building");
  build_cmd->add_option("--lo", cm_lo, "misclassification scale lower bound");
  build_cmd->add_option("--hi", cm_hi, "misclassification scale upper bound");
  build_cmd->add_flag("--no-round", cm_no_round, "keep scaled off-diagonals fractional");
  build_cmd->add_option("--name", cm_name, "matrix label in reports (default: file stem)");

  // ---- fuse ----
  auto* fuse_cmd = app.add_subcommand("fuse", "fuse a pool's test split with one method");
  std::string fu_manifest, fu_method, fu_cost, fu_out, fu_predictions, fu_format = "json";
  std::vector<std::string> fu_report_costs;
  double fu_alpha = 0.5;
  bool fu_renormalize = false;
  fuse_cmd->add_option("--manifest", fu_manifest, "pool manifest JSON")->required();
  fuse_cmd->add_option("--method", fu_method, "max-voting | average | af | cs-af")->required();
  fuse_cmd->add_option("--cost-matrix", fu_cost, "objective cost matrix CSV (cs-af only)");
  fuse_cmd->add_option("--report-cost", fu_report_costs,
                       "cost matrix CSVs priced in the report (any method)");
  fuse_cmd->add_option("--alpha", fu_alpha, "objective/subjective blend (default 0.5)");
  fuse_cmd->add_option("--out", fu_out, "report output path")->required();
  fuse_cmd->add_option("--predictions", fu_predictions, "fused per-sample predictions CSV");
  fuse_cmd->add_option("--format", fu_format, "report format: json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  fuse_cmd->add_flag("--renormalize", fu_renormalize, "repair near-valid probability rows");

  // ---- experiment ----
  auto* exp_cmd = app.add_subcommand("experiment", "random-subset fusion benchmark");
  std::string ex_manifest, ex_methods = "max-voting,average,af,cs-af";
  std::string ex_sizes = kDefaultSubsetSizes, ex_out_dir;
  std::vector<std::string> ex_costs;
  std::size_t ex_reps = 100;
  std::uint64_t ex_seed = 0;
  double ex_alpha = 0.5;
  unsigned ex_threads = 0;
  bool ex_renormalize = false;
  exp_cmd->add_option("--manifest", ex_manifest, "pool manifest JSON")->required();
  exp_cmd->add_option("--methods", ex_methods, "comma-separated fusion methods");
  exp_cmd->add_option("--N", ex_sizes, "comma-separated subset sizes");
  exp_cmd->add_option("--reps", ex_reps, "repetitions per subset size (default 100)");
  exp_cmd->add_option("--seed", ex_seed, "subset sampling seed");
  exp_cmd->add_option("--cost-matrix", ex_costs,
                      "cost matrix CSVs (cs-af objective + total-cost reporting)");
  exp_cmd->add_option("--out-dir", ex_out_dir, "output directory")->required();
  exp_cmd->add_option("--alpha", ex_alpha, "objective/subjective blend (default 0.5)");
  exp_cmd->add_option("--threads", ex_threads, "worker threads (default: machine parallelism)");
  exp_cmd->add_flag("--renormalize", ex_renormalize, "repair near-valid probability rows");

  // ---- synth ----
  auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic classifier pool");
  std::string sy_classes = kDefaultClasses, sy_severity, sy_out_dir;
  std::vector<std::string> sy_bias;
  csaf_synth_params sy_params;
  csaf_synth_params_init(&sy_params);
  synth_cmd->add_option("--out-dir", sy_out_dir, "output directory")->required();
  synth_cmd->add_option("--seed", sy_params.seed, "generation seed");
  synth_cmd->add_option("--k", sy_params.classifier_count, "classifier count");
  synth_cmd->add_option("--classes", sy_classes, "comma-separated class names");
  synth_cmd->add_option("--severity", sy_severity, "severity order (default: --classes order)");
  synth_cmd->add_option("--n-val", sy_params.n_val, "validation samples");
  synth_cmd->add_option("--n-test", sy_params.n_test, "test samples");
  synth_cmd->add_option("--acc-lo", sy_params.accuracy_lo, "per-classifier accuracy lower bound");
  synth_cmd->add_option("--acc-hi", sy_params.accuracy_hi, "per-classifier accuracy upper bound");
  synth_cmd->add_option("--sharpness-correct", sy_params.sharpness_correct,
                        "decision-vector peakedness on correct targets");
  synth_cmd->add_option("--sharpness-wrong", sy_params.sharpness_wrong,
                        "decision-vector peakedness on wrong targets");
  synth_cmd->add_option("--bias", sy_bias,
                        "idx[-idx]:FROM>TO:prob extra error mass (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
  if (build_cmd->parsed()) {
    auto schema = make_schema(cm_classes, cm_severity);
    csaf_costmat* raw = nullptr;
    check(csaf_costmat_build(schema.get(), cm_reverse ? 1 : 0, cm_lo, cm_hi,
                             cm_no_round ? 0 : 1, &raw));
    Handle<csaf_costmat> costmat(raw);
    if (cm_name.empty()) {
      std::string stem = cm_out;
      if (const auto slash = stem.find_last_of('/'); slash != std::string::npos)
        stem = stem.substr(slash + 1);
      if (const auto dot = stem.find_last_of('.'); dot != std::string::npos)
        stem = stem.substr(0, dot);
      cm_name = stem;
    }
    check(csaf_costmat_set_name(costmat.get(), cm_name.c_str()));
    check(csaf_costmat_save(costmat.get(), cm_out.c_str()));
    return 0;
  }

  if (fuse_cmd->parsed()) {
    csaf_method method;
    if (!parse_method_name(fu_method, &method)) {
      std::fprintf(stderr, "error: unknown method '%s'\n", fu_method.c_str());
      return 1;
    }
    if (method == CSAF_METHOD_CS_AF && fu_cost.empty()) {
      std::fprintf(stderr, "error: cs-af requires --cost-matrix\n");
      return 1;
    }
    if (method != CSAF_METHOD_CS_AF && !fu_cost.empty()) {
      std::fprintf(stderr, "error: --cost-matrix is only meaningful with cs-af; "
                           "use --report-cost for total-cost reporting\n");
      return 1;
    }

    csaf_pool* pool_raw = nullptr;
    check(csaf_pool_load(fu_manifest.c_str(), fu_renormalize ? 1 : 0, &pool_raw));
    Handle<csaf_pool> pool(pool_raw);
    print_pool_warnings(pool.get());

    Handle<csaf_costmat> objective;
    if (!fu_cost.empty()) {
      csaf_costmat* raw = nullptr;
      check(csaf_costmat_load(fu_cost.c_str(), &raw));
      objective.reset(raw);
    }

    std::vector<Handle<csaf_costmat>> report_costs;
    std::vector<const csaf_costmat*> report_ptrs;
    if (objective) {
      report_ptrs.push_back(objective.get());
    }
    for (const auto& path : fu_report_costs) {
      csaf_costmat* raw = nullptr;
      check(csaf_costmat_load(path.c_str(), &raw));
      report_costs.emplace_back(raw);
      report_ptrs.push_back(raw);
    }

    csaf_engine* engine_raw = nullptr;
    check(csaf_engine_create(pool.get(), method, objective.get(), fu_alpha, &engine_raw));
    Handle<csaf_engine> engine(engine_raw);

    csaf_eval* eval_raw = nullptr;
    check(csaf_evaluate(engine.get(), pool.get(), report_ptrs.data(), report_ptrs.size(),
                        &eval_raw));
    Handle<csaf_eval> eval(eval_raw);

    check(csaf_eval_save_report(eval.get(), fu_out.c_str(),
                                fu_format == "csv" ? CSAF_FORMAT_CSV : CSAF_FORMAT_JSON));
    if (!fu_predictions.empty())
      check(csaf_eval_save_predictions(eval.get(), fu_predictions.c_str()));
    return 0;
  }

  if (exp_cmd->parsed()) {
    csaf_pool* pool_raw = nullptr;
    check(csaf_pool_load(ex_manifest.c_str(), ex_renormalize ? 1 : 0, &pool_raw));
    Handle<csaf_pool> pool(pool_raw);
    print_pool_warnings(pool.get());

    std::vector<Handle<csaf_costmat>> costs;
    std::vector<const csaf_costmat*> cost_ptrs;
    for (const auto& arg : ex_costs) {
      for (const auto& path : split_list(arg)) {
        csaf_costmat* raw = nullptr;
        check(csaf_costmat_load(path.c_str(), &raw));
        costs.emplace_back(raw);
        cost_ptrs.push_back(raw);
      }
    }

    std::vector<csaf_contestant> contestants;
    for (const auto& name : split_list(ex_methods)) {
      csaf_method method;
      if (!parse_method_name(name, &method)) {
        std::fprintf(stderr, "error: unknown method '%s'\n", name.c_str());
        return 1;
      }
      if (method == CSAF_METHOD_CS_AF) {
        if (cost_ptrs.empty()) {
          std::fprintf(stderr, "error: cs-af requires --cost-matrix\n");
          return 1;
        }
        for (std::size_t i = 0; i < cost_ptrs.size(); ++i)
          contestants.push_back({method, static_cast<int>(i)});
      } else {
        contestants.push_back({method, -1});
      }
    }

    std::vector<std::size_t> sizes;
    for (const auto& token : split_list(ex_sizes))
      sizes.push_back(parse_size(token, "--N"));

    csaf_experiment* experiment_raw = nullptr;
    check(csaf_experiment_run(pool.get(), contestants.data(), contestants.size(), sizes.data(),
                              sizes.size(), ex_reps, ex_seed, cost_ptrs.data(),
                              cost_ptrs.size(), ex_alpha, ex_threads, &experiment_raw));
    Handle<csaf_experiment> experiment(experiment_raw);
    check(csaf_experiment_save(experiment.get(), ex_out_dir.c_str()));
    return 0;
  }

  if (synth_cmd->parsed()) {
    auto schema = make_schema(sy_classes, sy_severity);
    const auto class_names = split_list(sy_classes);
    const auto severity_names = split_list(sy_severity);
    const auto class_ptrs = c_strings(class_names);
    const auto severity_ptrs = c_strings(severity_names);
    sy_params.class_names = class_ptrs.data();
    sy_params.class_count = class_ptrs.size();
    sy_params.severity_names = severity_names.empty() ? nullptr : severity_ptrs.data();

    std::vector<csaf_bias_entry> bias;
    for (const auto& spec : sy_bias) {
      std::size_t lo = 0, hi = 0;
      const csaf_bias_entry proto = parse_bias_spec(spec, schema.get(), &lo, &hi);
      for (std::size_t idx = lo; idx <= hi; ++idx) {
        csaf_bias_entry entry = proto;
        entry.classifier = idx;
        bias.push_back(entry);
      }
    }
    sy_params.bias = bias.empty() ? nullptr : bias.data();
    sy_params.bias_count = bias.size();

    check(csaf_synth_write(&sy_params, sy_out_dir.c_str()));
    return 0;
  }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  return 0;
}
