#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtsim/clustering.hpp"
#include "mtsim/core.hpp"
#include "mtsim/pipeline.hpp"
#include "mtsim/synth.hpp"

namespace mtsim {

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

/// Dataset CSV: header row of feature names followed by "target", one row per
/// sample, '.' decimal separator, UTF-8.
void write_dataset_csv(const TaskDataset& data, const std::filesystem::path& path);
TaskDataset read_dataset_csv(const std::filesystem::path& path,
                             std::optional<std::string> task_id = std::nullopt);

/// Generation manifest next to the dataset CSVs; records the specs so the
/// oracle pipeline can rebuild the generating models.
struct Manifest {
  std::uint64_t base_seed = 0;
  std::size_t n = 0;
  std::vector<TaskSpec> specs;
  std::vector<std::string> degraded_task_ids;  // tasks modelled by degraded_model
};
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

/// Curve bundle: one JSON document holding, per task, the loss and per
/// feature the grid kind, knots, values, proportions (and counts for raw
/// curves) plus the importance value. Round-trips bit-exactly.
struct Bundle {
  std::vector<TaskProfile> profiles;
  std::string importance_source;  // "pfi", "uniform" or "file"
  std::size_t raw_k = 0;
  std::size_t grid_k = 0;
  std::optional<double> smooth_lambda;
};
void write_bundle(const Bundle& bundle, const std::filesystem::path& path);
Bundle read_bundle(const std::filesystem::path& path);

/// Matrix CSV: header "task" + column ids, one row per reference task.
void write_matrix_csv(const SimilarityMatrix& matrix, const std::filesystem::path& path);
SimilarityMatrix read_matrix_csv(const std::filesystem::path& path, bool scaled = false,
                                 Matching matching = Matching::by_name);

/// Metadata block for a matrix run: convention, matching, scaling, tau flags.
struct MatrixMeta {
  std::string matching;
  bool scaled = false;
  std::string tau;  // "median", a number, or "" when flags were not computed
  std::map<std::string, double> losses;
  std::map<std::string, bool> flags;
};
void write_matrix_meta(const MatrixMeta& meta, const std::filesystem::path& path);
MatrixMeta read_matrix_meta(const std::filesystem::path& path);

/// Per-pair per-feature breakdown table (reference task, compared task,
/// feature, matched feature, distance, importance, contribution).
struct PairRow {
  std::string ref_task;
  std::string other_task;
  std::string feature;
  std::string matched;
  double distance = 0.0;
  double importance = 0.0;
  double weighted = 0.0;
};
void write_pairs_csv(const std::vector<PairRow>& rows, const std::filesystem::path& path);
std::vector<PairRow> read_pairs_csv(const std::filesystem::path& path);

/// Cluster labels CSV (task, label).
void write_labels_csv(const std::map<std::string, std::size_t>& labels,
                      const std::vector<std::string>& task_order,
                      const std::filesystem::path& path);

/// Merge table CSV with columns step, a, b, height, size.
void write_merges_csv(const Dendrogram& dendro, const std::filesystem::path& path);

/// Plot-ready dendrogram bracket coordinates, one row per merge:
/// step, x_left, y_left, x_right, y_right, height.
void write_dendro_coords_csv(const Dendrogram& dendro, const std::filesystem::path& path);

}  // namespace mtsim
