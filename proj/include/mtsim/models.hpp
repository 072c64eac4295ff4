#pragma once

#include "mtsim/ale.hpp"
#include "mtsim/core.hpp"

namespace mtsim {

/// k-nearest-neighbour regressor on per-feature min-max-normalized inputs.
/// Prediction is the mean target of the k nearest training points under
/// Euclidean distance; ties are broken by training index.
Predictor fit_knn(const TaskDataset& data, std::size_t k);

/// Default neighbourhood size: max(5, n/100).
std::size_t default_k(std::size_t n);

/// Root mean squared error of f's predictions against the dataset's targets.
double rmse(const Predictor& f, const TaskDataset& data);

/// Binary cross-entropy with predictions clipped to [1e-9, 1 - 1e-9].
/// Targets must be 0 or 1.
double log_loss(const Predictor& f, const TaskDataset& data);

/// True when every target is exactly 0 or 1.
bool has_binary_targets(const TaskDataset& data);

/// RMSE for regression targets, log-loss for binary ones.
double empirical_loss(const Predictor& f, const TaskDataset& data);

}  // namespace mtsim
