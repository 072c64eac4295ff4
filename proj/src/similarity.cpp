#include "mtsim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mtsim/frechet.hpp"

namespace mtsim {

namespace {

// Minimum weighted Frechet distance from one curve of t to every feature of
// t_prime; ties resolve to the first feature in t_prime's (sorted) order.
std::pair<std::string, double> best_match_distance(const AleCurve& curve,
                                                   const TaskProfile& t_prime) {
  std::string matched;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [name, other] : t_prime.curves()) {
    const double d = weighted_frechet(curve, other);
    if (d < best) {
      best = d;
      matched = name;
    }
  }
  return {matched, best};
}

std::vector<FeatureContribution> breakdown_with_weights(
    const TaskProfile& t, const TaskProfile& t_prime, Matching matching,
    const std::map<std::string, double>& weights) {
  if (matching == Matching::by_name) {
    bool any_overlap = false;
    for (const auto& [name, curve] : t.curves()) {
      if (t_prime.curves().count(name) != 0) {
        any_overlap = true;
        break;
      }
    }
    if (!any_overlap) {
      throw ValidationError("task_similarity(" + t.task_id() + ", " + t_prime.task_id() +
                            "): no overlapping feature names under by_name matching");
    }
  }

  std::vector<FeatureContribution> rows;
  rows.reserve(t.curves().size());
  for (const auto& [name, curve] : t.curves()) {
    FeatureContribution row;
    row.feature = name;
    auto wit = weights.find(name);
    row.importance = wit == weights.end() ? 0.0 : wit->second;
    if (matching == Matching::by_name) {
      auto it = t_prime.curves().find(name);
      if (it != t_prime.curves().end()) {
        row.matched = name;
        row.distance = weighted_frechet(curve, it->second);
      } else {
        std::tie(row.matched, row.distance) = best_match_distance(curve, t_prime);
      }
    } else {
      std::tie(row.matched, row.distance) = best_match_distance(curve, t_prime);
    }
    row.weighted = row.importance * row.distance;
    rows.push_back(std::move(row));
  }
  return rows;
}

double sum_weighted(const std::vector<FeatureContribution>& rows) {
  double sum = 0.0;
  for (const auto& row : rows) sum += row.weighted;
  return sum;
}

}  // namespace

std::vector<FeatureContribution> similarity_breakdown(const TaskProfile& t,
                                                      const TaskProfile& t_prime,
                                                      Matching matching) {
  return breakdown_with_weights(t, t_prime, matching, t.importance());
}

double task_similarity(const TaskProfile& t, const TaskProfile& t_prime, Matching matching) {
  return sum_weighted(breakdown_with_weights(t, t_prime, matching, t.importance()));
}

double task_similarity(const TaskProfile& t, const TaskProfile& t_prime, Matching matching,
                       const std::map<std::string, double>& importance_override) {
  for (const auto& [name, v] : importance_override) {
    if (t.curves().count(name) == 0) {
      throw ValidationError("task_similarity: override weight for unknown feature '" + name +
                            "'");
    }
    if (!std::isfinite(v) || v < 0.0) {
      throw ValidationError("task_similarity: override weight for '" + name +
                            "' must be finite and non-negative");
    }
  }
  return sum_weighted(breakdown_with_weights(t, t_prime, matching, importance_override));
}

double performance_gamma(double loss_t, double loss_t_prime, double epsilon) {
  if (!(epsilon > 0.0)) throw ValidationError("performance_gamma: epsilon must be positive");
  if (loss_t < 0.0 || loss_t_prime < 0.0 || !std::isfinite(loss_t) ||
      !std::isfinite(loss_t_prime)) {
    throw ValidationError("performance_gamma: losses must be finite and non-negative");
  }
  const double lo = std::min(loss_t, loss_t_prime);
  const double hi = std::max(loss_t, loss_t_prime);
  return lo / (hi + epsilon);
}

double scaled_similarity(double delta, double gamma) {
  if (delta < 0.0) throw ValidationError("scaled_similarity: delta must be non-negative");
  if (gamma < 0.0 || gamma > 1.0) {
    throw ValidationError("scaled_similarity: gamma must lie in [0, 1]");
  }
  return gamma * delta;
}

std::map<std::string, bool> flag_unreliable(const std::map<std::string, double>& losses,
                                            std::optional<double> tau) {
  if (losses.empty()) throw ValidationError("flag_unreliable: empty loss map");
  double threshold;
  if (tau) {
    threshold = *tau;
  } else {
    std::vector<double> sorted;
    sorted.reserve(losses.size());
    for (const auto& [id, loss] : losses) sorted.push_back(loss);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    threshold = n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  std::map<std::string, bool> flags;
  for (const auto& [id, loss] : losses) flags[id] = loss > threshold;
  return flags;
}

SimilarityMatrix similarity_matrix(const std::vector<TaskProfile>& profiles, Matching matching,
                                   bool apply_gamma, unsigned threads) {
  if (profiles.size() < 2) throw ValidationError("similarity_matrix: needs at least 2 profiles");
  if (apply_gamma) {
    for (const auto& p : profiles) {
      if (!p.loss()) {
        throw ValidationError("similarity_matrix: profile '" + p.task_id() +
                              "' has no loss; cannot apply gamma");
      }
    }
  }
  const std::size_t t = profiles.size();
  std::vector<std::string> ids;
  ids.reserve(t);
  for (const auto& p : profiles) ids.push_back(p.task_id());

  Matrix values(t, t, 0.0);
  // One cell per off-diagonal pair; each worker writes only its own cell.
  parallel_for(t * t, threads, [&](std::size_t cell) {
    const std::size_t i = cell / t;
    const std::size_t j = cell % t;
    if (i == j) return;
    double delta = task_similarity(profiles[i], profiles[j], matching);
    if (apply_gamma) {
      delta = scaled_similarity(delta, performance_gamma(*profiles[i].loss(),
                                                         *profiles[j].loss()));
    }
    values(i, j) = delta;
  });
  return SimilarityMatrix(std::move(ids), std::move(values), apply_gamma, matching);
}

std::vector<std::vector<std::size_t>> cosine_prefilter(const std::vector<TaskProfile>& profiles,
                                                       double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw ValidationError("cosine_prefilter: threshold must lie in [0, 1]");
  }
  std::set<std::string> union_names;
  for (const auto& p : profiles) {
    for (const auto& [name, v] : p.importance()) union_names.insert(name);
  }
  std::vector<std::string> names(union_names.begin(), union_names.end());

  auto vectorize = [&names](const TaskProfile& p) {
    std::vector<double> v(names.size(), 0.0);
    for (std::size_t i = 0; i < names.size(); ++i) {
      auto it = p.importance().find(names[i]);
      if (it != p.importance().end()) v[i] = it->second;
    }
    return v;
  };
  auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      dot += a[i] * b[i];
      na += a[i] * a[i];
      nb += b[i] * b[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
  };

  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::vector<double>> anchors;
  for (std::size_t idx = 0; idx < profiles.size(); ++idx) {
    const std::vector<double> v = vectorize(profiles[idx]);
    bool joined = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (cosine(v, anchors[c]) >= threshold) {
        clusters[c].push_back(idx);
        joined = true;
        break;
      }
    }
    if (!joined) {
      clusters.push_back({idx});
      anchors.push_back(v);
    }
  }
  return clusters;
}

}  // namespace mtsim
