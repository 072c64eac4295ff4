#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mtsim/core.hpp"

namespace mtsim {

/// A trained model's prediction function plus the metadata the pipeline
/// needs. fn maps a batch of points (rows of a Matrix with dim columns) to
/// one prediction per row; it must be deterministic and safe for concurrent
/// read-only use.
struct Predictor {
  std::string task_id;
  std::size_t dim = 0;
  std::function<std::vector<double>(const Matrix&)> fn;

  /// Calls fn and validates the result shape and finiteness.
  std::vector<double> predict(const Matrix& batch) const;
};

/// Task-independent grid of pooled empirical quantiles for one feature.
struct CommonGrid {
  std::string feature;
  std::vector<double> knots;  // strictly increasing, >= 2
};

/// Index of the bin containing x under the left-open/right-closed convention
/// (values at or below edges[0] land in bin 0, values above the last edge in
/// the last bin).
std::size_t bin_index(double x, std::span<const double> edges);

/// Equally spaced partition of [min(values), max(values)] into k intervals.
/// The minimum value is assigned to the first interval. Throws on constant
/// input (degenerate feature).
Partition equal_width_partition(const std::string& feature, std::span<const double> values,
                                std::size_t k);

/// min(k, number of distinct values): features with few distinct values get
/// one bin per value.
std::size_t default_bin_count(std::span<const double> values, std::size_t k);

/// Uncentered ALE: per bin, the running sum of the average within-bin
/// prediction difference f(z_p, x_rest) - f(z_{p-1}, x_rest). Empty bins add
/// nothing and carry the accumulated value forward. Two predictor calls per
/// non-empty bin.
std::vector<double> uncentered_ale(const Predictor& f, const TaskDataset& data,
                                   const std::string& feature, const Partition& part);

/// Subtracts the count-weighted mean so the curve integrates to zero against
/// the empirical bin distribution.
std::vector<double> center_ale(std::span<const double> uncentered, const Partition& part);

/// Full raw-curve computation for one (task, feature) pair: partition,
/// accumulate, center. Knots are the bin upper edges.
AleCurve ale_curve(const Predictor& f, const TaskDataset& data, const std::string& feature,
                   std::size_t k);

/// K pooled quantiles at probabilities i/(K-1), linearly interpolated between
/// order statistics; duplicate knots collapse so the result is strictly
/// increasing (possibly fewer than k knots).
CommonGrid pooled_quantile_grid(const std::string& feature,
                                const std::vector<std::vector<double>>& per_task_values,
                                std::size_t k);

/// Projects a raw curve onto a common grid: values are linearly interpolated
/// (clamped to the endpoint values outside the raw knot range) and
/// proportions are recomputed from the task's own observations binned into
/// the grid's inter-knot intervals, then floored and renormalized.
AleCurve resample_to_grid(const AleCurve& curve, const CommonGrid& grid,
                          std::span<const double> per_task_values);

/// Whittaker-style smoother: minimizes sum (v-s)^2 + lambda * sum (second
/// differences of s)^2 via a banded solve, then re-centers the result so its
/// weighted mean (counts for raw curves, proportions otherwise) is zero.
/// lambda = 0 returns the curve unchanged.
AleCurve smooth_curve(const AleCurve& curve, double lambda);

}  // namespace mtsim
