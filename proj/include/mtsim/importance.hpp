#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "mtsim/ale.hpp"
#include "mtsim/core.hpp"

namespace mtsim {

struct PfiResult {
  /// Mean loss increase per feature, floored at 0, before normalization.
  std::map<std::string, double> raw;
  /// Normalized to sum 1; uniform when every raw value is 0.
  std::map<std::string, double> normalized;
};

/// Permutation feature importance: for each feature, the mean (over repeats)
/// increase in loss when that column is shuffled with a seeded permutation.
/// Loss is RMSE, or log-loss for binary targets. Deterministic per seed.
PfiResult permutation_importance_detail(const Predictor& f, const TaskDataset& data,
                                        std::size_t repeats, std::uint64_t seed);

std::map<std::string, double> permutation_importance(const Predictor& f, const TaskDataset& data,
                                                     std::size_t repeats, std::uint64_t seed);

/// Expert-specified weights, normalized to sum 1. Requires at least one
/// positive weight.
std::map<std::string, double> manual_importance(const std::map<std::string, double>& weights);

}  // namespace mtsim
