#include "mtsim/ale.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

namespace mtsim {

std::vector<double> Predictor::predict(const Matrix& batch) const {
  if (!fn) throw ValidationError("Predictor(" + task_id + "): missing prediction function");
  if (batch.cols() != dim) {
    throw ValidationError("Predictor(" + task_id + "): batch has " + std::to_string(batch.cols()) +
                          " columns, model expects " + std::to_string(dim));
  }
  std::vector<double> out = fn(batch);
  if (out.size() != batch.rows()) {
    throw NumericError("Predictor(" + task_id + "): " + std::to_string(out.size()) +
                       " predictions for " + std::to_string(batch.rows()) + " rows");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      throw NumericError("Predictor(" + task_id + "): non-finite prediction at batch row " +
                         std::to_string(i));
    }
  }
  return out;
}

std::size_t bin_index(double x, std::span<const double> edges) {
  // Bins are (z_{k-1}, z_k]; anything at or below z_0 maps to bin 0 and
  // anything above z_K to the last bin.
  const std::size_t k = edges.size() - 1;
  if (x <= edges[1]) return 0;
  auto it = std::lower_bound(edges.begin() + 1, edges.end(), x);
  if (it == edges.end()) return k - 1;
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Partition equal_width_partition(const std::string& feature, std::span<const double> values,
                                std::size_t k) {
  if (values.size() < 2) {
    throw ValidationError("equal_width_partition(" + feature + "): needs at least 2 values");
  }
  if (k == 0) throw ValidationError("equal_width_partition(" + feature + "): k must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(lo < hi)) {
    throw ValidationError("degenerate feature '" + feature + "': all observed values equal " +
                          std::to_string(lo));
  }
  std::vector<double> edges(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    edges[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(k));
  }
  edges.front() = lo;
  edges.back() = hi;
  std::vector<std::size_t> counts(k, 0);
  for (double x : values) ++counts[bin_index(x, edges)];
  return Partition(feature, std::move(edges), std::move(counts));
}

std::size_t default_bin_count(std::span<const double> values, std::size_t k) {
  std::set<double> distinct(values.begin(), values.end());
  return std::min(k, distinct.size());
}

std::vector<double> uncentered_ale(const Predictor& f, const TaskDataset& data,
                                   const std::string& feature, const Partition& part) {
  const auto j_opt = data.feature_index(feature);
  if (!j_opt) {
    throw ValidationError("uncentered_ale: task '" + data.task_id() + "' has no feature '" +
                          feature + "'");
  }
  const std::size_t j = *j_opt;
  const std::vector<double> col = data.column(j);
  const std::size_t k = part.bins();
  const auto& edges = part.edges();

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < col.size(); ++i) {
    members[bin_index(col[i], edges)].push_back(i);
  }
  for (std::size_t b = 0; b < k; ++b) {
    if (members[b].size() != part.counts()[b]) {
      throw ValidationError("uncentered_ale(" + data.task_id() + ", " + feature +
                            "): partition counts do not match the data");
    }
  }

  std::vector<double> out(k, 0.0);
  double acc = 0.0;
  Matrix batch;
  for (std::size_t b = 0; b < k; ++b) {
    const auto& rows = members[b];
    if (!rows.empty()) {
      batch = Matrix(rows.size(), data.d());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto src = data.samples().row(rows[r]);
        std::copy(src.begin(), src.end(), batch.row(r).begin());
        batch(r, j) = edges[b + 1];
      }
      std::vector<double> hi;
      std::vector<double> lo;
      try {
        hi = f.predict(batch);
        for (std::size_t r = 0; r < rows.size(); ++r) batch(r, j) = edges[b];
        lo = f.predict(batch);
      } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "prediction failed for task '" << data.task_id() << "', feature '" << feature
            << "', bin " << b + 1 << " of " << k << ": " << e.what();
        throw NumericError(msg.str());
      }
      double sum = 0.0;
      for (std::size_t r = 0; r < rows.size(); ++r) sum += hi[r] - lo[r];
      acc += sum / static_cast<double>(rows.size());
    }
    out[b] = acc;
  }
  return out;
}

std::vector<double> center_ale(std::span<const double> uncentered, const Partition& part) {
  if (uncentered.size() != part.bins()) {
    throw ValidationError("center_ale: " + std::to_string(uncentered.size()) + " values for " +
                          std::to_string(part.bins()) + " bins");
  }
  double weighted = 0.0;
  for (std::size_t b = 0; b < part.bins(); ++b) {
    weighted += static_cast<double>(part.counts()[b]) * uncentered[b];
  }
  const double mean = weighted / static_cast<double>(part.total_count());
  std::vector<double> out(uncentered.begin(), uncentered.end());
  for (double& v : out) v -= mean;
  return out;
}

AleCurve ale_curve(const Predictor& f, const TaskDataset& data, const std::string& feature,
                   std::size_t k) {
  const auto j_opt = data.feature_index(feature);
  if (!j_opt) {
    throw ValidationError("ale_curve: task '" + data.task_id() + "' has no feature '" + feature +
                          "'");
  }
  const std::vector<double> col = data.column(*j_opt);
  Partition part = equal_width_partition(feature, col, k);
  const std::vector<double> raw = uncentered_ale(f, data, feature, part);
  std::vector<double> centered = center_ale(raw, part);
  std::vector<double> knots(part.edges().begin() + 1, part.edges().end());
  return AleCurve(data.task_id(), feature, std::move(knots), std::move(centered),
                  part.proportions(), GridKind::raw, part.counts());
}

CommonGrid pooled_quantile_grid(const std::string& feature,
                                const std::vector<std::vector<double>>& per_task_values,
                                std::size_t k) {
  if (k < 2) throw ValidationError("pooled_quantile_grid(" + feature + "): k must be >= 2");
  std::vector<double> pooled;
  for (const auto& vals : per_task_values) pooled.insert(pooled.end(), vals.begin(), vals.end());
  if (pooled.size() < k) {
    throw ValidationError("pooled_quantile_grid(" + feature + "): pooled sample size " +
                          std::to_string(pooled.size()) + " below k = " + std::to_string(k));
  }
  std::sort(pooled.begin(), pooled.end());
  if (!(pooled.front() < pooled.back())) {
    throw ValidationError("degenerate feature '" + feature + "': pooled values are constant");
  }

  const std::size_t n = pooled.size();
  std::vector<double> knots;
  knots.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(k - 1);
    // h = (n-1)p + 1 over 1-based order statistics, interpolated linearly.
    const double h = static_cast<double>(n - 1) * p + 1.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double frac = h - std::floor(h);
    double q = pooled[lo - 1];
    if (frac > 0.0 && lo < n) q += frac * (pooled[lo] - pooled[lo - 1]);
    if (knots.empty() || q > knots.back()) knots.push_back(q);
  }
  if (knots.size() < 2) {
    throw ValidationError("degenerate feature '" + feature + "': quantile grid collapsed");
  }
  return CommonGrid{feature, std::move(knots)};
}

AleCurve resample_to_grid(const AleCurve& curve, const CommonGrid& grid,
                          std::span<const double> per_task_values) {
  if (curve.grid_kind() != GridKind::raw) {
    throw ValidationError("resample_to_grid(" + curve.task_id() + ", " + curve.feature() +
                          "): curve is already on a common grid");
  }
  if (grid.knots.size() < 2) {
    throw ValidationError("resample_to_grid(" + curve.feature() + "): grid needs >= 2 knots");
  }
  if (per_task_values.empty()) {
    throw ValidationError("resample_to_grid(" + curve.task_id() + ", " + curve.feature() +
                          "): no observations");
  }

  const auto& xs = curve.knots();
  const auto& ys = curve.values();
  const std::size_t k = grid.knots.size();

  std::vector<double> values(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double x = grid.knots[i];
    if (x <= xs.front()) {
      values[i] = ys.front();
    } else if (x >= xs.back()) {
      values[i] = ys.back();
    } else {
      const auto hi = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t h = static_cast<std::size_t>(hi - xs.begin());
      const double t = (x - xs[h - 1]) / (xs[h] - xs[h - 1]);
      values[i] = ys[h - 1] + t * (ys[h] - ys[h - 1]);
    }
  }

  // One bin per knot: (-inf, q_1], (q_1, q_2], ..., (q_{K-1}, +inf).
  std::vector<std::size_t> counts(k, 0);
  for (double x : per_task_values) {
    auto it = std::lower_bound(grid.knots.begin(), grid.knots.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - grid.knots.begin());
    if (idx >= k) idx = k - 1;
    ++counts[idx];
  }
  std::vector<double> proportions = floor_proportions(counts);

  return AleCurve(curve.task_id(), curve.feature(), grid.knots, std::move(values),
                  std::move(proportions), GridKind::common);
}

namespace {

// Solves (I + lambda * D2' D2) s = v for the pentadiagonal second-difference
// penalty via a banded Cholesky factorization (bandwidth 2).
std::vector<double> whittaker_solve(const std::vector<double>& v, double lambda) {
  const std::size_t n = v.size();
  // Symmetric band storage: diag[i], sub1[i] = A(i+1,i), sub2[i] = A(i+2,i).
  std::vector<double> diag(n, 1.0), sub1(n, 0.0), sub2(n, 0.0);
  for (std::size_t r = 0; r + 2 < n; ++r) {
    // Row r of D2 is (1, -2, 1) at columns r, r+1, r+2.
    diag[r] += lambda;
    diag[r + 1] += 4.0 * lambda;
    diag[r + 2] += lambda;
    sub1[r] += -2.0 * lambda;
    sub1[r + 1] += -2.0 * lambda;
    sub2[r] += lambda;
  }
  // LDL' factorization restricted to the band.
  std::vector<double> d(n), l1(n, 0.0), l2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double di = diag[i];
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    if (!(di > 0.0)) throw NumericError("smooth_curve: banded factorization broke down");
    d[i] = di;
    if (i + 1 < n) {
      double v1 = sub1[i];
      if (i >= 1) v1 -= l1[i - 1] * l2[i - 1] * d[i - 1];
      l1[i] = v1 / di;
    }
    if (i + 2 < n) l2[i] = sub2[i] / di;
  }
  // Forward substitution L z = v.
  std::vector<double> z(v);
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) z[i] -= l1[i - 1] * z[i - 1];
    if (i >= 2) z[i] -= l2[i - 2] * z[i - 2];
  }
  for (std::size_t i = 0; i < n; ++i) z[i] /= d[i];
  // Back substitution L' s = z.
  for (std::size_t i = n; i-- > 0;) {
    if (i + 1 < n) z[i] -= l1[i] * z[i + 1];
    if (i + 2 < n) z[i] -= l2[i] * z[i + 2];
  }
  return z;
}

}  // namespace

AleCurve smooth_curve(const AleCurve& curve, double lambda) {
  if (lambda < 0.0) throw ValidationError("smooth_curve: lambda must be non-negative");
  if (curve.size() < 3) {
    throw ValidationError("smooth_curve(" + curve.task_id() + ", " + curve.feature() +
                          "): needs at least 3 knots");
  }
  if (lambda == 0.0) return curve;

  std::vector<double> smoothed = whittaker_solve(curve.values(), lambda);

  double wsum = 0.0;
  double weighted = 0.0;
  if (curve.grid_kind() == GridKind::raw) {
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
      wsum += static_cast<double>(curve.counts()[i]);
      weighted += static_cast<double>(curve.counts()[i]) * smoothed[i];
    }
  } else {
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
      wsum += curve.proportions()[i];
      weighted += curve.proportions()[i] * smoothed[i];
    }
  }
  const double mean = weighted / wsum;
  for (double& v : smoothed) v -= mean;

  return AleCurve(curve.task_id(), curve.feature(), curve.knots(), std::move(smoothed),
                  curve.proportions(), curve.grid_kind(), curve.counts());
}

}  // namespace mtsim
