#include "dataio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace csaf {

namespace {

using nlohmann::json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io, "cannot write " + path.string());
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io, "cannot read " + path.string());
  return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::string nearest_class_name(const std::string& label, const ClassSchema& schema) {
  std::size_t best = SIZE_MAX;
  std::string name;
  for (const auto& candidate : schema.names) {
    const std::size_t d = edit_distance(label, candidate);
    if (d < best) {
      best = d;
      name = candidate;
    }
  }
  return name;
}

json matrix_to_json(std::size_t classes, const std::vector<double>& cells) {
  json rows = json::array();
  for (std::size_t p = 0; p < classes; ++p) {
    json row = json::array();
    for (std::size_t q = 0; q < classes; ++q) row.push_back(cells[p * classes + q]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> matrix_from_json(const json& rows, std::size_t classes) {
  if (!rows.is_array() || rows.size() != classes)
    fail(errc::parse, "matrix row count does not match class count");
  std::vector<double> cells;
  cells.reserve(classes * classes);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != classes)
      fail(errc::parse, "matrix column count does not match class count");
    for (const auto& cell : row) cells.push_back(cell.get<double>());
  }
  return cells;
}

json optional_to_json(const std::optional<double>& value) {
  if (!value) return nullptr;
  return *value;
}

std::optional<double> optional_from_json(const json& value) {
  if (value.is_null()) return std::nullopt;
  return value.get<double>();
}

json method_evaluation_to_json(const MethodEvaluation& eval) {
  json j;
  j["method"] = eval.method;
  j["alpha"] = eval.alpha;
  j["accuracy"] = eval.accuracy;
  j["confusion_matrix"] = matrix_to_json(eval.confusion.classes, eval.confusion.cells);
  j["total_cost"] = eval.total_costs;
  json sens = json::array(), spec = json::array();
  for (const auto& v : eval.sensitivity) sens.push_back(optional_to_json(v));
  for (const auto& v : eval.specificity) spec.push_back(optional_to_json(v));
  j["sensitivity"] = std::move(sens);
  j["specificity"] = std::move(spec);
  return j;
}

MethodEvaluation method_evaluation_from_json(const json& j, std::size_t classes) {
  MethodEvaluation eval;
  eval.method = j.at("method").get<std::string>();
  eval.alpha = j.at("alpha").get<double>();
  eval.accuracy = j.at("accuracy").get<double>();
  eval.confusion =
      ConfusionMatrix::create(classes, matrix_from_json(j.at("confusion_matrix"), classes));
  eval.total_costs = j.at("total_cost").get<std::vector<double>>();
  for (const auto& v : j.at("sensitivity")) eval.sensitivity.push_back(optional_from_json(v));
  for (const auto& v : j.at("specificity")) eval.specificity.push_back(optional_from_json(v));
  return eval;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size())
    fail(errc::parse, "not a number: '" + std::string(text) + "'");
  return value;
}

Manifest load_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(open_input(path));
  } catch (const json::exception& e) {
    fail(errc::parse, path.string() + ": " + e.what());
  }

  Manifest manifest;
  try {
    const auto classes = doc.at("classes").get<std::vector<std::string>>();
    const auto severity = doc.at("severity").get<std::vector<std::string>>();
    manifest.schema = ClassSchema::create(classes, severity);

    const auto base = path.parent_path();
    std::unordered_set<std::string> ids;
    for (const auto& entry : doc.at("classifiers")) {
      Manifest::Entry e;
      e.id = entry.at("id").get<std::string>();
      if (!ids.insert(e.id).second)
        fail(errc::validation, "duplicate classifier id: " + e.id);
      e.val = base / entry.at("val").get<std::string>();
      e.test = base / entry.at("test").get<std::string>();
      manifest.classifiers.push_back(std::move(e));
    }
    if (manifest.classifiers.empty())
      fail(errc::validation, "manifest lists no classifiers");
    if (doc.contains("val_labels"))
      manifest.val_labels = base / doc.at("val_labels").get<std::string>();
    if (doc.contains("test_labels"))
      manifest.test_labels = base / doc.at("test_labels").get<std::string>();
  } catch (const json::exception& e) {
    fail(errc::parse, path.string() + ": " + e.what());
  }
  return manifest;
}

PredictionFile load_predictions(const std::filesystem::path& path, const ClassSchema& schema,
                                bool renormalize_rows) {
  auto in = open_input(path);
  const std::size_t m = schema.size();

  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, path.string() + ": empty file");
  auto header = split_csv_line(strip_cr(line));
  if (header.size() != m + 1 || header[0] != "sample_id")
    fail(errc::parse, path.string() + ": header must be sample_id,<classes>");
  for (std::size_t i = 0; i < m; ++i) {
    if (header[i + 1] != schema.names[i])
      fail(errc::parse, path.string() + ": header column " + std::to_string(i + 1) +
                            " is '" + header[i + 1] + "', schema expects '" +
                            schema.names[i] + "'");
  }

  PredictionFile file;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  std::vector<double> row(m);
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != m + 1)
      fail(errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(m + 1) + " fields, got " +
                            std::to_string(fields.size()));
    if (!seen.insert(fields[0]).second)
      fail(errc::validation,
           path.string() + ":" + std::to_string(line_no) + ": duplicate sample_id " + fields[0]);
    for (std::size_t i = 0; i < m; ++i) row[i] = parse_double(fields[i + 1]);

    if (renormalize_rows) {
      const DecisionVector fixed = renormalize(row);
      std::copy(fixed.begin(), fixed.end(), row.begin());
    } else if (auto violation = validate_decision_vector(row)) {
      fail(errc::validation,
           path.string() + ":" + std::to_string(line_no) + ": " + *violation);
    }
    file.sample_ids.push_back(fields[0]);
    file.values.insert(file.values.end(), row.begin(), row.end());
  }
  return file;
}

void save_predictions(const std::filesystem::path& path, const ClassSchema& schema,
                      std::span<const std::string> sample_ids, std::span<const double> values) {
  const std::size_t m = schema.size();
  if (values.size() != sample_ids.size() * m)
    fail(errc::dimension_mismatch, "prediction value count does not match samples");
  auto out = open_output(path);
  out << "sample_id";
  for (const auto& name : schema.names) out << ',' << name;
  out << '\n';
  for (std::size_t s = 0; s < sample_ids.size(); ++s) {
    out << sample_ids[s];
    for (std::size_t l = 0; l < m; ++l) out << ',' << format_double(values[s * m + l]);
    out << '\n';
  }
}

std::unordered_map<std::string, std::size_t> load_labels(const std::filesystem::path& path,
                                                         const ClassSchema& schema,
                                                         std::vector<std::string>* warnings) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, path.string() + ": empty file");
  auto header = split_csv_line(strip_cr(line));
  if (header.size() != 2 || header[0] != "sample_id" || header[1] != "label")
    fail(errc::parse, path.string() + ": header must be sample_id,label");

  std::unordered_map<std::string, std::size_t> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 2)
      fail(errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected 2 fields");
    const auto cls = schema.find(fields[1]);
    if (!cls)
      fail(errc::validation, path.string() + ":" + std::to_string(line_no) +
                                 ": unknown label '" + fields[1] + "' (closest known: " +
                                 nearest_class_name(fields[1], schema) + ")");
    if (!labels.emplace(fields[0], *cls).second)
      fail(errc::validation,
           path.string() + ":" + std::to_string(line_no) + ": duplicate sample_id " + fields[0]);
  }
  if (labels.empty() && warnings)
    warnings->push_back(path.string() + ": label file has no rows");
  return labels;
}

void save_labels(const std::filesystem::path& path, const ClassSchema& schema,
                 std::span<const std::string> sample_ids, std::span<const std::size_t> labels) {
  if (sample_ids.size() != labels.size())
    fail(errc::dimension_mismatch, "label count does not match samples");
  auto out = open_output(path);
  out << "sample_id,label\n";
  for (std::size_t s = 0; s < sample_ids.size(); ++s)
    out << sample_ids[s] << ',' << schema.names.at(labels[s]) << '\n';
}

LoadedCostMatrix load_cost_matrix(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) fail(errc::parse, path.string() + ": empty file");
  auto header = split_csv_line(strip_cr(line));
  if (header.size() < 3 || !header[0].empty())
    fail(errc::parse, path.string() + ": header must be ,<class names>");

  LoadedCostMatrix loaded;
  loaded.class_names.assign(header.begin() + 1, header.end());
  const std::size_t m = loaded.class_names.size();

  std::vector<double> cells;
  cells.reserve(m * m);
  std::size_t line_no = 1;
  std::size_t row_idx = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != m + 1)
      fail(errc::parse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(m + 1) + " fields");
    if (row_idx >= m || fields[0] != loaded.class_names[row_idx])
      fail(errc::parse, path.string() + ":" + std::to_string(line_no) +
                            ": row label does not match header order");
    for (std::size_t q = 0; q < m; ++q) cells.push_back(parse_double(fields[q + 1]));
    ++row_idx;
  }
  if (row_idx != m) fail(errc::parse, path.string() + ": expected " + std::to_string(m) + " rows");
  loaded.matrix = CostMatrix::create(m, std::move(cells));
  return loaded;
}

void save_cost_matrix(const std::filesystem::path& path,
                      std::span<const std::string> class_names, const CostMatrix& matrix) {
  if (class_names.size() != matrix.classes)
    fail(errc::dimension_mismatch, "class name count does not match cost matrix");
  auto out = open_output(path);
  for (const auto& name : class_names) out << ',' << name;
  out << '\n';
  for (std::size_t p = 0; p < matrix.classes; ++p) {
    out << class_names[p];
    for (std::size_t q = 0; q < matrix.classes; ++q)
      out << ',' << format_double(matrix.at(p, q));
    out << '\n';
  }
}

void require_schema_names(std::span<const std::string> names, const ClassSchema& schema) {
  if (names.size() != schema.size())
    fail(errc::dimension_mismatch, "class count does not match schema");
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] != schema.names[i])
      fail(errc::validation, "class '" + names[i] + "' does not match schema order ('" +
                                 schema.names[i] + "' expected)");
}

namespace {

PredictionSet assemble_split(const Manifest& manifest, bool use_val, bool renormalize,
                             const std::optional<std::filesystem::path>& labels_path,
                             std::vector<std::string>* warnings) {
  PredictionSet split;
  split.classes = manifest.schema.size();

  std::unordered_map<std::string, std::size_t> position;
  for (std::size_t c = 0; c < manifest.classifiers.size(); ++c) {
    const auto& entry = manifest.classifiers[c];
    PredictionFile file =
        load_predictions(use_val ? entry.val : entry.test, manifest.schema, renormalize);
    if (c == 0) {
      split.sample_ids = file.sample_ids;
      for (std::size_t s = 0; s < split.sample_ids.size(); ++s)
        position.emplace(split.sample_ids[s], s);
      split.predictions.assign(manifest.classifiers.size(),
                               std::vector<double>(split.sample_ids.size() * split.classes));
      split.predictions[0] = std::move(file.values);
      continue;
    }
    if (file.sample_ids.size() != split.sample_ids.size())
      fail(errc::validation, "classifier " + entry.id + " covers " +
                                 std::to_string(file.sample_ids.size()) + " samples, pool has " +
                                 std::to_string(split.sample_ids.size()));
    // align rows to the first classifier's order
    std::vector<double>& block = split.predictions[c];
    for (std::size_t s = 0; s < file.sample_ids.size(); ++s) {
      const auto it = position.find(file.sample_ids[s]);
      if (it == position.end())
        fail(errc::validation, "classifier " + entry.id + " covers unknown sample " +
                                   file.sample_ids[s]);
      std::copy(file.values.begin() + s * split.classes,
                file.values.begin() + (s + 1) * split.classes,
                block.begin() + it->second * split.classes);
    }
  }

  if (labels_path) {
    const auto by_id = load_labels(*labels_path, manifest.schema, warnings);
    std::vector<std::size_t> labels(split.sample_ids.size());
    for (std::size_t s = 0; s < split.sample_ids.size(); ++s) {
      const auto it = by_id.find(split.sample_ids[s]);
      if (it == by_id.end())
        fail(errc::validation,
             labels_path->string() + ": no label for sample " + split.sample_ids[s]);
      labels[s] = it->second;
    }
    if (by_id.size() > split.sample_ids.size() && warnings)
      warnings->push_back(labels_path->string() + ": " +
                          std::to_string(by_id.size() - split.sample_ids.size()) +
                          " labels cover no pooled sample");
    split.labels = std::move(labels);
  }
  split.validate();
  return split;
}

}  // namespace

ClassifierPool load_pool(const std::filesystem::path& manifest_path, bool renormalize) {
  const Manifest manifest = load_manifest(manifest_path);
  ClassifierPool pool;
  pool.schema = manifest.schema;
  for (const auto& entry : manifest.classifiers) pool.classifier_ids.push_back(entry.id);
  pool.validation =
      assemble_split(manifest, true, renormalize, manifest.val_labels, &pool.warnings);
  pool.test = assemble_split(manifest, false, renormalize, manifest.test_labels, &pool.warnings);
  return pool;
}

std::vector<std::string> default_classifier_ids(std::size_t count) {
  std::size_t width = 2;
  for (std::size_t v = count; v > 100; v /= 10) ++width;
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::string num = std::to_string(c);
    ids.push_back("c" + std::string(width - std::min(width, num.size()), '0') + num);
  }
  return ids;
}

void write_pool(const std::filesystem::path& directory, const ClassSchema& schema,
                const SyntheticPool& pool) {
  std::filesystem::create_directories(directory);
  const std::size_t k = pool.validation.classifier_count();

  json manifest;
  manifest["classes"] = schema.names;
  json severity = json::array();
  for (std::size_t idx : schema.classes_by_severity()) severity.push_back(schema.names[idx]);
  manifest["severity"] = std::move(severity);
  manifest["val_labels"] = "labels_val.csv";
  manifest["test_labels"] = "labels_test.csv";

  json classifiers = json::array();
  const std::vector<std::string> ids = default_classifier_ids(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::string& id = ids[c];
    const std::string val_name = id + "_val.csv";
    const std::string test_name = id + "_test.csv";
    save_predictions(directory / val_name, schema, pool.validation.sample_ids,
                     pool.validation.predictions[c]);
    save_predictions(directory / test_name, schema, pool.test.sample_ids,
                     pool.test.predictions[c]);
    classifiers.push_back({{"id", id}, {"val", val_name}, {"test", test_name}});
  }
  manifest["classifiers"] = std::move(classifiers);

  save_labels(directory / "labels_val.csv", schema, pool.validation.sample_ids,
              *pool.validation.labels);
  save_labels(directory / "labels_test.csv", schema, pool.test.sample_ids, *pool.test.labels);

  auto out = open_output(directory / "manifest.json");
  out << manifest.dump(2) << '\n';
}

namespace {

json objective_audit_to_json(const ObjectiveAudit& audit, std::size_t classes) {
  json j;
  j["cost_matrix"] = audit.cost_label;
  json entries = json::array();
  for (std::size_t c = 0; c < audit.report.classifiers.size(); ++c) {
    const auto& a = audit.report.classifiers[c];
    entries.push_back({{"id", audit.classifier_ids[c]},
                       {"validation_confusion", matrix_to_json(classes, a.validation.cells)},
                       {"cost_adjusted", matrix_to_json(classes, a.cost_adjusted.cells)},
                       {"micro_f1", a.micro_f1},
                       {"weight", a.objective_weight}});
  }
  j["classifiers"] = std::move(entries);
  return j;
}

ObjectiveAudit objective_audit_from_json(const json& j, std::size_t classes) {
  ObjectiveAudit audit;
  audit.cost_label = j.at("cost_matrix").get<std::string>();
  for (const auto& entry : j.at("classifiers")) {
    audit.classifier_ids.push_back(entry.at("id").get<std::string>());
    ClassifierWeightAudit a;
    a.validation = ConfusionMatrix::create(
        classes, matrix_from_json(entry.at("validation_confusion"), classes));
    a.cost_adjusted =
        ConfusionMatrix::create(classes, matrix_from_json(entry.at("cost_adjusted"), classes));
    a.micro_f1 = entry.at("micro_f1").get<double>();
    a.objective_weight = entry.at("weight").get<double>();
    audit.report.classifiers.push_back(std::move(a));
  }
  return audit;
}

void write_evaluation_csv(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "metric,value\n";
  out << "method," << report.method << '\n';
  out << "alpha," << format_double(report.alpha) << '\n';
  out << "samples," << report.sample_ids.size() << '\n';
  if (report.metrics) {
    out << "accuracy," << format_double(report.metrics->accuracy) << '\n';
    for (std::size_t i = 0; i < report.cost_names.size(); ++i)
      out << "total_cost_" << report.cost_names[i] << ','
          << format_double(report.metrics->total_costs[i]) << '\n';
    for (std::size_t cls = 0; cls < report.schema.size(); ++cls) {
      out << "sensitivity_" << report.schema.names[cls] << ',';
      if (report.metrics->sensitivity[cls])
        out << format_double(*report.metrics->sensitivity[cls]);
      out << '\n';
      out << "specificity_" << report.schema.names[cls] << ',';
      if (report.metrics->specificity[cls])
        out << format_double(*report.metrics->specificity[cls]);
      out << '\n';
    }
  }
}

}  // namespace

void write_evaluation_report(const EvaluationReport& report, const std::filesystem::path& path,
                             ReportFormat format) {
  if (format == ReportFormat::csv) {
    write_evaluation_csv(report, path);
    return;
  }
  json j;
  j["classes"] = report.schema.names;
  json severity = json::array();
  for (std::size_t idx : report.schema.classes_by_severity())
    severity.push_back(report.schema.names[idx]);
  j["severity"] = std::move(severity);
  j["method"] = report.method;
  j["alpha"] = report.alpha;
  j["cost_matrices"] = report.cost_names;
  j["sample_ids"] = report.sample_ids;
  j["predicted"] = report.predicted;
  j["fused_scores"] = report.fused_scores;
  j["metrics"] =
      report.metrics ? method_evaluation_to_json(*report.metrics) : json(nullptr);
  j["objective_weights"] = report.objective
                               ? objective_audit_to_json(*report.objective, report.schema.size())
                               : json(nullptr);
  auto out = open_output(path);
  out << j.dump(2) << '\n';
}

EvaluationReport read_evaluation_report(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(open_input(path));
  } catch (const json::exception& e) {
    fail(errc::parse, path.string() + ": " + e.what());
  }
  try {
    EvaluationReport report;
    report.schema = ClassSchema::create(j.at("classes").get<std::vector<std::string>>(),
                                        j.at("severity").get<std::vector<std::string>>());
    report.method = j.at("method").get<std::string>();
    report.alpha = j.at("alpha").get<double>();
    report.cost_names = j.at("cost_matrices").get<std::vector<std::string>>();
    report.sample_ids = j.at("sample_ids").get<std::vector<std::string>>();
    report.predicted = j.at("predicted").get<std::vector<std::size_t>>();
    report.fused_scores = j.at("fused_scores").get<std::vector<std::vector<double>>>();
    if (!j.at("metrics").is_null())
      report.metrics = method_evaluation_from_json(j.at("metrics"), report.schema.size());
    if (!j.at("objective_weights").is_null())
      report.objective =
          objective_audit_from_json(j.at("objective_weights"), report.schema.size());
    return report;
  } catch (const json::exception& e) {
    fail(errc::parse, path.string() + ": " + e.what());
  }
}

void write_fused_predictions(const EvaluationReport& report, const std::filesystem::path& path) {
  auto out = open_output(path);
  out << "sample_id,predicted";
  for (const auto& name : report.schema.names) out << ',' << name;
  out << '\n';
  for (std::size_t s = 0; s < report.sample_ids.size(); ++s) {
    out << report.sample_ids[s] << ',' << report.schema.names[report.predicted[s]];
    for (double score : report.fused_scores[s]) out << ',' << format_double(score);
    out << '\n';
  }
}

namespace {

json stats_to_json(const MetricStats& stats) {
  if (stats.count == 0) return nullptr;
  return json{{"mean", stats.mean}, {"stddev", stats.stddev}, {"count", stats.count}};
}

void write_stats_fields(std::ofstream& out, const MetricStats& stats) {
  out << ',';
  if (stats.count > 0) out << format_double(stats.mean);
  out << ',';
  if (stats.count > 0) out << format_double(stats.stddev);
}

}  // namespace

void write_experiment(const ExperimentReport& report, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);

  json j;
  j["config"] = {{"seed", report.seed},
                 {"repetitions", report.repetitions},
                 {"alpha", report.alpha},
                 {"subset_sizes", report.subset_sizes}};
  j["classes"] = report.class_names;
  j["cost_matrices"] = report.cost_names;
  j["contestants"] = report.contestant_names;
  json results = json::array();
  for (std::size_t c = 0; c < report.contestant_names.size(); ++c) {
    json by_size = json::array();
    for (std::size_t size_idx = 0; size_idx < report.subset_sizes.size(); ++size_idx) {
      const CellAggregate& cell = report.cells[c][size_idx];
      json entry;
      entry["N"] = report.subset_sizes[size_idx];
      entry["accuracy"] = stats_to_json(cell.accuracy);
      json costs = json::object();
      for (std::size_t i = 0; i < report.cost_names.size(); ++i)
        costs[report.cost_names[i]] = stats_to_json(cell.total_cost[i]);
      entry["total_cost"] = std::move(costs);
      json sens = json::object(), spec = json::object();
      for (std::size_t cls = 0; cls < report.class_names.size(); ++cls) {
        sens[report.class_names[cls]] = stats_to_json(cell.sensitivity[cls]);
        spec[report.class_names[cls]] = stats_to_json(cell.specificity[cls]);
      }
      entry["sensitivity"] = std::move(sens);
      entry["specificity"] = std::move(spec);
      by_size.push_back(std::move(entry));
    }
    results.push_back({{"contestant", report.contestant_names[c]},
                       {"by_subset_size", std::move(by_size)}});
  }
  j["results"] = std::move(results);
  {
    auto out = open_output(directory / "experiment.json");
    out << j.dump(2) << '\n';
  }

  {
    auto out = open_output(directory / "curves.csv");
    out << "method,N,accuracy_mean,accuracy_std";
    for (const auto& name : report.cost_names)
      out << ",cost_" << name << "_mean,cost_" << name << "_std";
    out << '\n';
    for (std::size_t c = 0; c < report.contestant_names.size(); ++c) {
      for (std::size_t size_idx = 0; size_idx < report.subset_sizes.size(); ++size_idx) {
        const CellAggregate& cell = report.cells[c][size_idx];
        out << report.contestant_names[c] << ',' << report.subset_sizes[size_idx];
        write_stats_fields(out, cell.accuracy);
        for (const auto& cost : cell.total_cost) write_stats_fields(out, cost);
        out << '\n';
      }
    }
  }

  {
    auto out = open_output(directory / "per_class.csv");
    out << "method,N,class,sensitivity_mean,specificity_mean\n";
    for (std::size_t c = 0; c < report.contestant_names.size(); ++c) {
      for (std::size_t size_idx = 0; size_idx < report.subset_sizes.size(); ++size_idx) {
        const CellAggregate& cell = report.cells[c][size_idx];
        for (std::size_t cls = 0; cls < report.class_names.size(); ++cls) {
          out << report.contestant_names[c] << ',' << report.subset_sizes[size_idx] << ','
              << report.class_names[cls] << ',';
          if (cell.sensitivity[cls].count > 0) out << format_double(cell.sensitivity[cls].mean);
          out << ',';
          if (cell.specificity[cls].count > 0) out << format_double(cell.specificity[cls].mean);
          out << '\n';
        }
      }
    }
  }
}

}  // namespace csaf
