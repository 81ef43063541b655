#pragma once

#include <filesystem>
#include <unordered_map>

#include "harness.hpp"
#include "synth.hpp"
#include "types.hpp"

namespace csaf {

// Shortest decimal representation that parses back to the same double;
// all CSV emission goes through this so files are bit-stable.
std::string format_double(double value);
double parse_double(std::string_view text);  // full-token parse or errc::parse

enum class ReportFormat { json, csv };

/// Pool description parsed from a manifest file. Paths are resolved against
/// the manifest's directory.
struct Manifest {
  ClassSchema schema;
  struct Entry {
    std::string id;
    std::filesystem::path val;
    std::filesystem::path test;
  };
  std::vector<Entry> classifiers;
  std::optional<std::filesystem::path> val_labels;
  std::optional<std::filesystem::path> test_labels;
};

Manifest load_manifest(const std::filesystem::path& path);

/// One classifier's prediction file: rows in file order.
struct PredictionFile {
  std::vector<std::string> sample_ids;
  std::vector<double> values;  // flat n x m, schema class order
};

// Header must be `sample_id,<class...>` in schema order. Rows are validated
// at the ingest tolerance; with renormalize on, non-negative rows with a
// positive sum are rescaled instead of rejected.
PredictionFile load_predictions(const std::filesystem::path& path, const ClassSchema& schema,
                                bool renormalize = false);
void save_predictions(const std::filesystem::path& path, const ClassSchema& schema,
                      std::span<const std::string> sample_ids, std::span<const double> values);

// `sample_id,label` with class-name labels. Unknown labels report the nearest
// known name.
std::unordered_map<std::string, std::size_t> load_labels(const std::filesystem::path& path,
                                                         const ClassSchema& schema,
                                                         std::vector<std::string>* warnings = nullptr);
void save_labels(const std::filesystem::path& path, const ClassSchema& schema,
                 std::span<const std::string> sample_ids, std::span<const std::size_t> labels);

/// Cost matrix CSV: first row and column carry class names.
struct LoadedCostMatrix {
  std::vector<std::string> class_names;
  CostMatrix matrix;
};

LoadedCostMatrix load_cost_matrix(const std::filesystem::path& path);
void save_cost_matrix(const std::filesystem::path& path,
                      std::span<const std::string> class_names, const CostMatrix& matrix);

// Errors unless `names` equals the schema's class names in order.
void require_schema_names(std::span<const std::string> names, const ClassSchema& schema);

// Assembles a pool from a manifest: every classifier must cover the same
// sample ids per split (rows are aligned to the first classifier's order).
ClassifierPool load_pool(const std::filesystem::path& manifest_path, bool renormalize = false);

// "c00", "c01", ... zero-padded ids for generated pools.
std::vector<std::string> default_classifier_ids(std::size_t count);

// Writes manifest.json, per-classifier prediction CSVs and label CSVs for a
// generated pool; the result is loadable by load_pool.
void write_pool(const std::filesystem::path& directory, const ClassSchema& schema,
                const SyntheticPool& pool);

void write_evaluation_report(const EvaluationReport& report, const std::filesystem::path& path,
                             ReportFormat format);
EvaluationReport read_evaluation_report(const std::filesystem::path& path);

// `sample_id,predicted,<per-class normalized scores>`
void write_fused_predictions(const EvaluationReport& report, const std::filesystem::path& path);

// experiment.json plus curves.csv / per_class.csv flat tables.
void write_experiment(const ExperimentReport& report, const std::filesystem::path& directory);

}  // namespace csaf
