#include "mtsim/importance.hpp"

#include <algorithm>
#include <cmath>

#include "mtsim/models.hpp"
#include "mtsim/rng.hpp"

namespace mtsim {

namespace {

double loss_on(const Predictor& f, const Matrix& samples, const std::vector<double>& targets,
               bool binary) {
  const std::vector<double> preds = f.predict(samples);
  double sum = 0.0;
  if (binary) {
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const double p = std::clamp(preds[i], 1e-9, 1.0 - 1e-9);
      sum += targets[i] == 1.0 ? -std::log(p) : -std::log(1.0 - p);
    }
    return sum / static_cast<double>(preds.size());
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double e = preds[i] - targets[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(preds.size()));
}

}  // namespace

PfiResult permutation_importance_detail(const Predictor& f, const TaskDataset& data,
                                        std::size_t repeats, std::uint64_t seed) {
  if (data.n() < 10) {
    throw ValidationError("permutation_importance(" + data.task_id() +
                          "): needs at least 10 samples");
  }
  if (repeats == 0) throw ValidationError("permutation_importance: repeats must be positive");

  const bool binary = has_binary_targets(data);
  const double baseline = loss_on(f, data.samples(), data.targets(), binary);

  PfiResult result;
  Matrix work = data.samples();
  for (std::size_t j = 0; j < data.d(); ++j) {
    const std::vector<double> col = data.column(j);
    double total = 0.0;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
      Rng rng = Rng::stream(seed, j * repeats + rep);
      const std::vector<std::size_t> perm = rng.permutation(data.n());
      for (std::size_t i = 0; i < data.n(); ++i) work(i, j) = col[perm[i]];
      total += loss_on(f, work, data.targets(), binary) - baseline;
    }
    for (std::size_t i = 0; i < data.n(); ++i) work(i, j) = col[i];
    const double mean = total / static_cast<double>(repeats);
    result.raw[data.feature_names()[j]] = mean > 0.0 ? mean : 0.0;
  }

  double sum = 0.0;
  for (const auto& [name, v] : result.raw) sum += v;
  if (sum > 0.0) {
    result.normalized = normalize_importance(result.raw);
  } else {
    const double uniform = 1.0 / static_cast<double>(data.d());
    for (const auto& name : data.feature_names()) result.normalized[name] = uniform;
  }
  return result;
}

std::map<std::string, double> permutation_importance(const Predictor& f, const TaskDataset& data,
                                                     std::size_t repeats, std::uint64_t seed) {
  return permutation_importance_detail(f, data, repeats, seed).normalized;
}

std::map<std::string, double> manual_importance(const std::map<std::string, double>& weights) {
  return normalize_importance(weights);
}

}  // namespace mtsim
