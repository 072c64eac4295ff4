#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtsim/core.hpp"

namespace mtsim {

/// One row of the per-feature breakdown behind delta_t(t').
struct FeatureContribution {
  std::string feature;   // feature of the reference task t
  std::string matched;   // feature of t' it was compared against
  double distance = 0.0; // weighted Frechet distance of the matched pair
  double importance = 0.0;
  double weighted = 0.0; // importance * distance
};

/// Per-feature distances and contributions for delta_t(t_prime). The
/// similarity value is the sum of the weighted column.
std::vector<FeatureContribution> similarity_breakdown(const TaskProfile& t,
                                                      const TaskProfile& t_prime,
                                                      Matching matching);

/// Multi-task similarity delta_t(t'): importance-weighted sum over t's
/// features of the weighted Frechet distance to the matched feature of t'.
/// by_name pairs same-named features (features missing from t' fall back to
/// the minimum over all of t''s features); best_match takes the minimum over
/// all features of t' for every feature of t.
double task_similarity(const TaskProfile& t, const TaskProfile& t_prime, Matching matching);

/// Same, with explicit per-feature weights for t (not renormalized), for
/// expert-weight experiments such as zeroing out individual features.
double task_similarity(const TaskProfile& t, const TaskProfile& t_prime, Matching matching,
                       const std::map<std::string, double>& importance_override);

/// Performance factor min(L, L')/(max(L, L') + epsilon) in [0, 1].
double performance_gamma(double loss_t, double loss_t_prime, double epsilon = 1e-8);

/// gamma * delta.
double scaled_similarity(double delta, double gamma);

/// Flags every task whose loss strictly exceeds tau; tau = nullopt resolves
/// to the median loss across tasks.
std::map<std::string, bool> flag_unreliable(const std::map<std::string, double>& losses,
                                            std::optional<double> tau);

/// Full T x T matrix of delta values, rows indexing the reference task. With
/// apply_gamma each entry is multiplied by the pair's performance factor
/// (every profile must then carry a loss). Pairwise cells are independent and
/// run on `threads` workers; the result is identical for any thread count.
SimilarityMatrix similarity_matrix(const std::vector<TaskProfile>& profiles, Matching matching,
                                   bool apply_gamma, unsigned threads = 1);

/// Greedy clustering on the cosine similarity of importance vectors (over the
/// union of feature names; missing features read as 0). A task joins the
/// first cluster whose founding member is within the threshold, else founds a
/// new cluster. Meant as a cheap prefilter before full delta computation.
std::vector<std::vector<std::size_t>> cosine_prefilter(const std::vector<TaskProfile>& profiles,
                                                       double threshold);

}  // namespace mtsim
