#include "mtsim/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace mtsim {

std::string to_string(Matching m) {
  return m == Matching::by_name ? "by_name" : "best_match";
}

Matching matching_from_string(const std::string& s) {
  if (s == "by_name") return Matching::by_name;
  if (s == "best_match") return Matching::best_match;
  throw ValidationError("unknown matching mode '" + s + "' (expected by_name or best_match)");
}

std::string to_string(GridKind k) { return k == GridKind::raw ? "raw" : "common"; }

GridKind grid_kind_from_string(const std::string& s) {
  if (s == "raw") return GridKind::raw;
  if (s == "common") return GridKind::common;
  throw ValidationError("unknown grid kind '" + s + "' (expected raw or common)");
}

std::optional<std::size_t> TaskDataset::feature_index(const std::string& name) const {
  for (std::size_t j = 0; j < feature_names_.size(); ++j) {
    if (feature_names_[j] == name) return j;
  }
  return std::nullopt;
}

TaskDataset validate_dataset(std::string task_id, std::vector<std::string> feature_names,
                             Matrix samples, std::vector<double> targets) {
  if (task_id.empty()) throw ValidationError("task_id must be non-empty");
  if (samples.rows() < 2) {
    throw ValidationError("task '" + task_id + "': needs at least 2 samples, got " +
                          std::to_string(samples.rows()));
  }
  if (samples.cols() < 1) throw ValidationError("task '" + task_id + "': needs at least 1 feature");
  if (feature_names.size() != samples.cols()) {
    throw ValidationError("task '" + task_id + "': " + std::to_string(feature_names.size()) +
                          " feature names for " + std::to_string(samples.cols()) + " columns");
  }
  if (targets.size() != samples.rows()) {
    throw ValidationError("task '" + task_id + "': " + std::to_string(targets.size()) +
                          " targets for " + std::to_string(samples.rows()) + " rows");
  }
  std::set<std::string> seen;
  for (const auto& name : feature_names) {
    if (name.empty()) throw ValidationError("task '" + task_id + "': empty feature name");
    if (!seen.insert(name).second) {
      throw ValidationError("task '" + task_id + "': duplicate feature name '" + name + "'");
    }
  }
  for (std::size_t r = 0; r < samples.rows(); ++r) {
    for (std::size_t c = 0; c < samples.cols(); ++c) {
      if (!std::isfinite(samples(r, c))) {
        std::ostringstream msg;
        msg << "task '" << task_id << "': non-finite value at (" << r << ", " << c << ")";
        throw ValidationError(msg.str());
      }
    }
    if (!std::isfinite(targets[r])) {
      std::ostringstream msg;
      msg << "task '" << task_id << "': non-finite target at row " << r;
      throw ValidationError(msg.str());
    }
  }
  TaskDataset out;
  out.task_id_ = std::move(task_id);
  out.feature_names_ = std::move(feature_names);
  out.samples_ = std::move(samples);
  out.targets_ = std::move(targets);
  return out;
}

double proportion_floor(std::size_t n, std::size_t k) {
  if (n == 0 || k == 0) throw ValidationError("proportion_floor: n and k must be positive");
  // 1/(10n) unless that is infeasible for k bins summing to 1.
  return std::min(1.0 / (10.0 * static_cast<double>(n)), 1.0 / static_cast<double>(k));
}

std::vector<double> floor_proportions(const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw ValidationError("floor_proportions: empty counts");
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) throw ValidationError("floor_proportions: all counts are zero");

  const std::size_t k = counts.size();
  const double floor = proportion_floor(n, k);
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(n);
  }

  double deficit = 0.0;
  double surplus = 0.0;
  for (double v : p) {
    if (v < floor) {
      deficit += floor - v;
    } else {
      surplus += v - floor;
    }
  }
  if (deficit == 0.0) return p;
  if (surplus <= 0.0) {
    // Only reachable when floor == 1/k; the uniform vector is the unique answer.
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(k));
    return p;
  }
  // Raise low bins to the floor and take the mass from the surplus bins,
  // scaled by their surplus so none drops below the floor.
  const double scale = deficit / surplus;
  for (double& v : p) {
    v = v < floor ? floor : floor + (v - floor) * (1.0 - scale);
  }
  return p;
}

namespace {

void check_proportions(const std::string& context, const std::vector<double>& p,
                       std::size_t expected_size) {
  if (p.size() != expected_size) {
    throw ValidationError(context + ": " + std::to_string(p.size()) + " proportions for " +
                          std::to_string(expected_size) + " bins");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v > 0.0) || v > 1.0) {
      throw ValidationError(context + ": proportion " + std::to_string(v) +
                            " outside (0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ValidationError(context + ": proportions sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

}  // namespace

Partition::Partition(std::string feature, std::vector<double> edges,
                     std::vector<std::size_t> counts)
    : feature_(std::move(feature)), edges_(std::move(edges)), counts_(std::move(counts)) {
  if (feature_.empty()) throw ValidationError("Partition: empty feature name");
  if (counts_.empty()) throw ValidationError("Partition: needs at least one bin");
  if (edges_.size() != counts_.size() + 1) {
    throw ValidationError("Partition(" + feature_ + "): " + std::to_string(edges_.size()) +
                          " edges for " + std::to_string(counts_.size()) + " bins");
  }
  if (!all_finite(edges_) || !strictly_increasing(edges_)) {
    throw ValidationError("Partition(" + feature_ + "): edges must be finite and strictly increasing");
  }
  for (std::size_t c : counts_) total_ += c;
  if (total_ == 0) throw ValidationError("Partition(" + feature_ + "): no observations");
  proportions_ = floor_proportions(counts_);
  check_proportions("Partition(" + feature_ + ")", proportions_, counts_.size());
  const double floor = proportion_floor(total_, counts_.size());
  for (double v : proportions_) {
    if (v < floor) {
      throw ValidationError("Partition(" + feature_ + "): proportion below floor");
    }
  }
}

AleCurve::AleCurve(std::string task_id, std::string feature, std::vector<double> knots,
                   std::vector<double> values, std::vector<double> proportions,
                   GridKind grid_kind, std::vector<std::size_t> counts)
    : task_id_(std::move(task_id)),
      feature_(std::move(feature)),
      knots_(std::move(knots)),
      values_(std::move(values)),
      proportions_(std::move(proportions)),
      counts_(std::move(counts)),
      grid_kind_(grid_kind) {
  const std::string context = "AleCurve(" + task_id_ + ", " + feature_ + ")";
  if (knots_.empty()) throw ValidationError(context + ": empty curve");
  if (!all_finite(knots_) || !strictly_increasing(knots_)) {
    throw ValidationError(context + ": knots must be finite and strictly increasing");
  }
  if (values_.size() != knots_.size()) {
    throw ValidationError(context + ": " + std::to_string(values_.size()) + " values for " +
                          std::to_string(knots_.size()) + " knots");
  }
  if (!all_finite(values_)) throw ValidationError(context + ": non-finite value");
  check_proportions(context, proportions_, knots_.size());

  if (grid_kind_ == GridKind::raw) {
    if (counts_.size() != knots_.size()) {
      throw ValidationError(context + ": raw curve needs per-bin counts");
    }
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
      total += static_cast<double>(counts_[i]);
      weighted += static_cast<double>(counts_[i]) * values_[i];
    }
    if (total <= 0.0) throw ValidationError(context + ": raw curve with zero total count");
    if (std::abs(weighted / total) > 1e-9) {
      throw ValidationError(context + ": raw curve is not centered (count-weighted mean " +
                            std::to_string(weighted / total) + ")");
    }
  } else if (!counts_.empty()) {
    throw ValidationError(context + ": common-grid curve must not carry counts");
  }
}

std::map<std::string, double> normalize_importance(const std::map<std::string, double>& raw) {
  if (raw.empty()) throw ValidationError("normalize_importance: empty map");
  double sum = 0.0;
  for (const auto& [name, v] : raw) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("normalize_importance: weight for '" + name +
                            "' must be finite and non-negative");
    }
    sum += v;
  }
  if (sum <= 0.0) throw ValidationError("normalize_importance: all weights are zero");
  std::map<std::string, double> out;
  for (const auto& [name, v] : raw) out[name] = v / sum;
  return out;
}

TaskProfile::TaskProfile(std::string task_id, std::map<std::string, AleCurve> curves,
                         std::map<std::string, double> importance, std::optional<double> loss,
                         bool flagged)
    : task_id_(std::move(task_id)),
      curves_(std::move(curves)),
      importance_(std::move(importance)),
      loss_(loss),
      flagged_(flagged) {
  const std::string context = "TaskProfile(" + task_id_ + ")";
  if (task_id_.empty()) throw ValidationError("TaskProfile: empty task_id");
  if (curves_.empty()) throw ValidationError(context + ": no curves");
  if (curves_.size() != importance_.size()) {
    throw ValidationError(context + ": curves and importance have different key sets");
  }
  double sum = 0.0;
  for (const auto& [name, v] : importance_) {
    if (curves_.find(name) == curves_.end()) {
      throw ValidationError(context + ": importance for unknown feature '" + name + "'");
    }
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw ValidationError(context + ": importance for '" + name + "' outside [0, 1]");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError(context + ": importance sums to " + std::to_string(sum) +
                          ", expected 1");
  }
  if (loss_ && (!std::isfinite(*loss_) || *loss_ < 0.0)) {
    throw ValidationError(context + ": loss must be finite and non-negative");
  }
}

const AleCurve& TaskProfile::curve(const std::string& feature) const {
  auto it = curves_.find(feature);
  if (it == curves_.end()) {
    throw ValidationError("TaskProfile(" + task_id_ + "): no curve for feature '" + feature + "'");
  }
  return it->second;
}

TaskProfile TaskProfile::with_importance(std::map<std::string, double> importance) const {
  return TaskProfile(task_id_, curves_, std::move(importance), loss_, flagged_);
}

TaskProfile TaskProfile::with_flag(bool flagged) const {
  return TaskProfile(task_id_, curves_, importance_, loss_, flagged);
}

TaskProfile TaskProfile::with_curves(std::map<std::string, AleCurve> curves) const {
  return TaskProfile(task_id_, std::move(curves), importance_, loss_, flagged_);
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> task_ids, Matrix values, bool scaled,
                                   Matching matching)
    : task_ids_(std::move(task_ids)), values_(std::move(values)), scaled_(scaled),
      matching_(matching) {
  const std::size_t t = task_ids_.size();
  if (t == 0) throw ValidationError("SimilarityMatrix: no tasks");
  if (values_.rows() != t || values_.cols() != t) {
    throw ValidationError("SimilarityMatrix: values must be " + std::to_string(t) + "x" +
                          std::to_string(t));
  }
  std::set<std::string> seen;
  for (const auto& id : task_ids_) {
    if (!seen.insert(id).second) {
      throw ValidationError("SimilarityMatrix: duplicate task id '" + id + "'");
    }
  }
  for (std::size_t i = 0; i < t; ++i) {
    if (values_(i, i) != 0.0) {
      throw ValidationError("SimilarityMatrix: diagonal entry for '" + task_ids_[i] +
                            "' must be 0");
    }
    for (std::size_t j = 0; j < t; ++j) {
      const double v = values_(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("SimilarityMatrix: entry (" + task_ids_[i] + ", " + task_ids_[j] +
                              ") must be finite and non-negative");
      }
    }
  }
}

std::optional<std::size_t> SimilarityMatrix::index_of(const std::string& task_id) const {
  for (std::size_t i = 0; i < task_ids_.size(); ++i) {
    if (task_ids_[i] == task_id) return i;
  }
  return std::nullopt;
}

}  // namespace mtsim
