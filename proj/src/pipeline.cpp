#include "mtsim/pipeline.hpp"

#include <map>
#include <set>

#include "mtsim/importance.hpp"
#include "mtsim/models.hpp"
#include "mtsim/rng.hpp"

namespace mtsim {

std::string to_string(ImportanceSource s) {
  return s == ImportanceSource::pfi ? "pfi" : "uniform";
}

ImportanceSource importance_source_from_string(const std::string& s) {
  if (s == "pfi") return ImportanceSource::pfi;
  if (s == "uniform") return ImportanceSource::uniform;
  throw ValidationError("unknown importance source '" + s + "' (expected pfi or uniform)");
}

std::vector<TaskProfile> build_profiles(const std::vector<TaskDataset>& tasks,
                                        const std::vector<Predictor>& models,
                                        const ProfileOptions& options) {
  if (tasks.empty()) throw ValidationError("build_profiles: no tasks");
  if (tasks.size() != models.size()) {
    throw ValidationError("build_profiles: " + std::to_string(models.size()) + " models for " +
                          std::to_string(tasks.size()) + " tasks");
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (models[i].task_id != tasks[i].task_id()) {
      throw ValidationError("build_profiles: model '" + models[i].task_id +
                            "' paired with task '" + tasks[i].task_id() + "'");
    }
  }

  // Raw curves per (task, feature); jobs are independent and run on the
  // worker pool, each writing its own slot.
  struct Job {
    std::size_t task;
    std::string feature;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    for (const auto& name : tasks[i].feature_names()) jobs.push_back({i, name});
  }
  std::vector<std::optional<AleCurve>> job_curves(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto col = tasks[job.task].column(*tasks[job.task].feature_index(job.feature));
    const std::size_t k = default_bin_count(col, options.raw_k);
    job_curves[j] = ale_curve(models[job.task], tasks[job.task], job.feature, k);
  });
  std::vector<std::map<std::string, AleCurve>> raw(tasks.size());
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    raw[jobs[j].task].emplace(jobs[j].feature, std::move(*job_curves[j]));
  }

  // Pooled quantile grid per feature name, over the tasks that carry it.
  std::set<std::string> names;
  for (const auto& task : tasks) {
    names.insert(task.feature_names().begin(), task.feature_names().end());
  }
  std::map<std::string, CommonGrid> grids;
  for (const auto& name : names) {
    std::vector<std::vector<double>> pooled;
    for (const auto& task : tasks) {
      if (auto j = task.feature_index(name)) pooled.push_back(task.column(*j));
    }
    grids.emplace(name, pooled_quantile_grid(name, pooled, options.grid_k));
  }

  // Importance and loss per task, also independent across tasks.
  std::vector<std::map<std::string, double>> importances(tasks.size());
  std::vector<double> losses(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    if (options.importance == ImportanceSource::pfi) {
      importances[i] = permutation_importance(models[i], tasks[i], options.pfi_repeats,
                                              Rng::mix(options.pfi_seed ^ Rng::mix(i)));
    } else {
      const double uniform = 1.0 / static_cast<double>(tasks[i].d());
      for (const auto& name : tasks[i].feature_names()) importances[i][name] = uniform;
    }
    losses[i] = empirical_loss(models[i], tasks[i]);
  });

  std::vector<TaskProfile> profiles;
  profiles.reserve(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    std::map<std::string, AleCurve> curves;
    for (const auto& [name, curve] : raw[i]) {
      const auto col = tasks[i].column(*tasks[i].feature_index(name));
      AleCurve common = resample_to_grid(curve, grids.at(name), col);
      if (options.smooth_lambda) common = smooth_curve(common, *options.smooth_lambda);
      curves.emplace(name, std::move(common));
    }
    profiles.emplace_back(tasks[i].task_id(), std::move(curves), std::move(importances[i]),
                          losses[i]);
  }
  return profiles;
}

}  // namespace mtsim
