#include "mtsim/models.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

namespace mtsim {

namespace {

struct KnnState {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::vector<double> lo;        // per-feature minimum
  std::vector<double> inv_range; // 1/(max-min), 0 for constant features
  std::vector<double> columns;   // normalized train data, column-major
  std::vector<double> targets;
};

}  // namespace

std::size_t default_k(std::size_t n) { return std::max<std::size_t>(5, n / 100); }

Predictor fit_knn(const TaskDataset& data, std::size_t k) {
  if (k == 0) throw ValidationError("fit_knn: k must be positive");
  if (k > data.n()) {
    throw ValidationError("fit_knn(" + data.task_id() + "): k = " + std::to_string(k) +
                          " exceeds n = " + std::to_string(data.n()));
  }
  auto state = std::make_shared<KnnState>();
  state->n = data.n();
  state->d = data.d();
  state->k = k;
  state->lo.resize(state->d);
  state->inv_range.resize(state->d);
  state->columns.resize(state->n * state->d);
  state->targets = data.targets();
  for (std::size_t j = 0; j < state->d; ++j) {
    std::vector<double> col = data.column(j);
    const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
    state->lo[j] = *mn;
    state->inv_range[j] = *mx > *mn ? 1.0 / (*mx - *mn) : 0.0;
    double* out = state->columns.data() + j * state->n;
    for (std::size_t i = 0; i < state->n; ++i) {
      out[i] = (col[i] - state->lo[j]) * state->inv_range[j];
    }
  }

  auto fn = [state](const Matrix& batch) {
    std::vector<double> preds(batch.rows());
    std::vector<double> dist2(state->n);
    std::vector<std::uint32_t> order(state->n);
    for (std::size_t r = 0; r < batch.rows(); ++r) {
      std::fill(dist2.begin(), dist2.end(), 0.0);
      const auto row = batch.row(r);
      for (std::size_t j = 0; j < state->d; ++j) {
        const double q = (row[j] - state->lo[j]) * state->inv_range[j];
        const double* col = state->columns.data() + j * state->n;
        for (std::size_t i = 0; i < state->n; ++i) {
          const double diff = q - col[i];
          dist2[i] += diff * diff;
        }
      }
      std::iota(order.begin(), order.end(), 0u);
      auto closer = [&dist2](std::uint32_t a, std::uint32_t b) {
        return dist2[a] != dist2[b] ? dist2[a] < dist2[b] : a < b;
      };
      std::nth_element(order.begin(), order.begin() + (state->k - 1), order.end(), closer);
      std::sort(order.begin(), order.begin() + state->k, closer);
      double sum = 0.0;
      for (std::size_t i = 0; i < state->k; ++i) sum += state->targets[order[i]];
      preds[r] = sum / static_cast<double>(state->k);
    }
    return preds;
  };
  return Predictor{data.task_id(), data.d(), std::move(fn)};
}

double rmse(const Predictor& f, const TaskDataset& data) {
  const std::vector<double> preds = f.predict(data.samples());
  double sq = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double e = preds[i] - data.targets()[i];
    sq += e * e;
  }
  return std::sqrt(sq / static_cast<double>(preds.size()));
}

bool has_binary_targets(const TaskDataset& data) {
  for (double y : data.targets()) {
    if (y != 0.0 && y != 1.0) return false;
  }
  return true;
}

double log_loss(const Predictor& f, const TaskDataset& data) {
  if (!has_binary_targets(data)) {
    throw ValidationError("log_loss(" + data.task_id() + "): targets must be 0 or 1");
  }
  const std::vector<double> preds = f.predict(data.samples());
  double sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const double p = std::clamp(preds[i], 1e-9, 1.0 - 1e-9);
    sum += data.targets()[i] == 1.0 ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / static_cast<double>(preds.size());
}

double empirical_loss(const Predictor& f, const TaskDataset& data) {
  return has_binary_targets(data) ? log_loss(f, data) : rmse(f, data);
}

}  // namespace mtsim
