#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtsim/common.hpp"

namespace mtsim {

/// How features of two tasks are paired when aggregating per-feature
/// distances: by shared name, or by the minimum over all features of the
/// other task.
enum class Matching { by_name, best_match };

enum class GridKind { raw, common };

std::string to_string(Matching m);
Matching matching_from_string(const std::string& s);
std::string to_string(GridKind k);
GridKind grid_kind_from_string(const std::string& s);

/// A task's tabular samples, targets and named features. Construct through
/// validate_dataset; instances are immutable and always well-formed.
class TaskDataset {
 public:
  const std::string& task_id() const { return task_id_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const Matrix& samples() const { return samples_; }
  const std::vector<double>& targets() const { return targets_; }

  std::size_t n() const { return samples_.rows(); }
  std::size_t d() const { return samples_.cols(); }

  std::vector<double> column(std::size_t j) const { return samples_.column(j); }
  std::optional<std::size_t> feature_index(const std::string& name) const;

  friend TaskDataset validate_dataset(std::string task_id,
                                      std::vector<std::string> feature_names,
                                      Matrix samples, std::vector<double> targets);

 private:
  TaskDataset() = default;
  std::string task_id_;
  std::vector<std::string> feature_names_;
  Matrix samples_;
  std::vector<double> targets_;
};

/// Validates shapes, finiteness and feature-name uniqueness; never drops rows.
TaskDataset validate_dataset(std::string task_id, std::vector<std::string> feature_names,
                             Matrix samples, std::vector<double> targets);

/// Smallest admissible bin proportion for a task with n observations split
/// into k bins. Keeps the max/min weight ratio finite when bins are empty.
double proportion_floor(std::size_t n, std::size_t k);

/// Turns bin counts into proportions that sum to exactly 1 with every entry
/// at or above proportion_floor(sum(counts), counts.size()). Bins below the
/// floor are raised to it and the excess is taken from the remaining bins in
/// proportion to their surplus, so no entry ever drops below the floor.
std::vector<double> floor_proportions(const std::vector<std::size_t>& counts);

/// An interval partition of one feature's observed range: edges z_0 < … < z_K
/// with per-bin counts and floored proportions.
class Partition {
 public:
  Partition(std::string feature, std::vector<double> edges, std::vector<std::size_t> counts);

  const std::string& feature() const { return feature_; }
  const std::vector<double>& edges() const { return edges_; }       // K+1 values
  const std::vector<std::size_t>& counts() const { return counts_; }  // K values
  const std::vector<double>& proportions() const { return proportions_; }

  std::size_t bins() const { return counts_.size(); }
  std::size_t total_count() const { return total_; }

 private:
  std::string feature_;
  std::vector<double> edges_;
  std::vector<std::size_t> counts_;
  std::vector<double> proportions_;
  std::size_t total_ = 0;
};

/// A per-feature polygonal ALE curve. knots are the bin upper edges (raw) or
/// common-grid knots; values are centered ALE values. Raw curves carry the
/// bin counts used for centering and must have a count-weighted mean of zero.
class AleCurve {
 public:
  AleCurve(std::string task_id, std::string feature, std::vector<double> knots,
           std::vector<double> values, std::vector<double> proportions, GridKind grid_kind,
           std::vector<std::size_t> counts = {});

  const std::string& task_id() const { return task_id_; }
  const std::string& feature() const { return feature_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& proportions() const { return proportions_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  GridKind grid_kind() const { return grid_kind_; }

  std::size_t size() const { return knots_.size(); }

 private:
  std::string task_id_;
  std::string feature_;
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> proportions_;
  std::vector<std::size_t> counts_;  // empty for common-grid curves
  GridKind grid_kind_ = GridKind::raw;
};

/// Normalizes a non-negative importance map so the values sum to 1.
/// Idempotent up to floating point.
std::map<std::string, double> normalize_importance(const std::map<std::string, double>& raw);

/// A task's full explanation: one curve per feature, a normalized importance
/// vector, and optionally the model's empirical loss.
class TaskProfile {
 public:
  TaskProfile(std::string task_id, std::map<std::string, AleCurve> curves,
              std::map<std::string, double> importance,
              std::optional<double> loss = std::nullopt, bool flagged = false);

  const std::string& task_id() const { return task_id_; }
  const std::map<std::string, AleCurve>& curves() const { return curves_; }
  const std::map<std::string, double>& importance() const { return importance_; }
  std::optional<double> loss() const { return loss_; }
  bool flagged() const { return flagged_; }

  const AleCurve& curve(const std::string& feature) const;

  TaskProfile with_importance(std::map<std::string, double> importance) const;
  TaskProfile with_flag(bool flagged) const;
  TaskProfile with_curves(std::map<std::string, AleCurve> curves) const;

 private:
  std::string task_id_;
  std::map<std::string, AleCurve> curves_;
  std::map<std::string, double> importance_;
  std::optional<double> loss_;
  bool flagged_ = false;
};

/// T×T matrix of delta_t(t') values. Rows index the reference task t, columns
/// the compared task t'.
class SimilarityMatrix {
 public:
  SimilarityMatrix(std::vector<std::string> task_ids, Matrix values, bool scaled,
                   Matching matching);

  const std::vector<std::string>& task_ids() const { return task_ids_; }
  const Matrix& values() const { return values_; }
  bool scaled() const { return scaled_; }
  Matching matching() const { return matching_; }

  std::size_t size() const { return task_ids_.size(); }
  double value(std::size_t row, std::size_t col) const { return values_(row, col); }
  std::optional<std::size_t> index_of(const std::string& task_id) const;

 private:
  std::vector<std::string> task_ids_;
  Matrix values_;
  bool scaled_ = false;
  Matching matching_ = Matching::by_name;
};

}  // namespace mtsim
