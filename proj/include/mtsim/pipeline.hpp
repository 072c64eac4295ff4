#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mtsim/ale.hpp"
#include "mtsim/core.hpp"

namespace mtsim {

enum class ImportanceSource { pfi, uniform };

std::string to_string(ImportanceSource s);
ImportanceSource importance_source_from_string(const std::string& s);

struct ProfileOptions {
  std::size_t raw_k = 50;   // equal-width bins per raw curve (capped by distinct values)
  std::size_t grid_k = 50;  // pooled quantile knots per feature
  std::optional<double> smooth_lambda;  // applied after resampling when set
  ImportanceSource importance = ImportanceSource::pfi;
  std::size_t pfi_repeats = 5;
  std::uint64_t pfi_seed = 0;
  unsigned threads = 1;  // worker threads for per-(task, feature) jobs
};

/// Runs the per-task explanation pipeline: raw ALE curves for every (task,
/// feature) pair, pooled per-feature quantile grids, resampling onto them,
/// optional smoothing, importance estimation and empirical loss. models[i]
/// must belong to tasks[i].
std::vector<TaskProfile> build_profiles(const std::vector<TaskDataset>& tasks,
                                        const std::vector<Predictor>& models,
                                        const ProfileOptions& options);

}  // namespace mtsim
