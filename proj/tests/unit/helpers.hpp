#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mtsim/ale.hpp"
#include "mtsim/core.hpp"
#include "mtsim/rng.hpp"

namespace mtsim::test {

// Naive evaluation of the uncentered/centered ALE formulas with scalar
// predictor calls and explicit loops. Kept deliberately independent of the
// library's batched implementation.
struct NaiveAle {
  std::vector<double> uncentered;
  std::vector<double> centered;
};

inline NaiveAle naive_ale(const std::function<double(std::vector<double>)>& f,
                          const Matrix& samples, std::size_t j,
                          const std::vector<double>& edges) {
  const std::size_t k = edges.size() - 1;
  const std::size_t n = samples.rows();

  auto bin_of = [&edges, k](double x) {
    if (x <= edges[1]) return std::size_t{0};
    for (std::size_t b = 1; b < k; ++b) {
      if (x > edges[b] && x <= edges[b + 1]) return b;
    }
    return k - 1;
  };

  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t i = 0; i < n; ++i) members[bin_of(samples(i, j))].push_back(i);

  NaiveAle out;
  out.uncentered.assign(k, 0.0);
  double acc = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    if (!members[b].empty()) {
      double sum = 0.0;
      for (std::size_t i : members[b]) {
        std::vector<double> hi(samples.row(i).begin(), samples.row(i).end());
        std::vector<double> lo = hi;
        hi[j] = edges[b + 1];
        lo[j] = edges[b];
        sum += f(hi) - f(lo);
      }
      acc += sum / static_cast<double>(members[b].size());
    }
    out.uncentered[b] = acc;
  }

  double weighted = 0.0;
  for (std::size_t b = 0; b < k; ++b) {
    weighted += static_cast<double>(members[b].size()) * out.uncentered[b];
  }
  const double mean = weighted / static_cast<double>(n);
  out.centered = out.uncentered;
  for (double& v : out.centered) v -= mean;
  return out;
}

// Dense Gaussian-elimination solve of (I + lambda * D2' D2) s = v, as an
// oracle for the banded smoother.
inline std::vector<double> dense_whittaker(const std::vector<double>& v, double lambda) {
  const std::size_t n = v.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  for (std::size_t r = 0; r + 2 < n; ++r) {
    const double row[3] = {1.0, -2.0, 1.0};
    for (int x = 0; x < 3; ++x) {
      for (int y = 0; y < 3; ++y) {
        a[r + x][r + y] += lambda * row[x] * row[y];
      }
    }
  }
  std::vector<double> b = v;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double m = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
      b[r] -= m * b[col];
    }
  }
  std::vector<double> s(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t cix = i + 1; cix < n; ++cix) acc -= a[i][cix] * s[cix];
    s[i] = acc / a[i][i];
  }
  return s;
}

// Random common-grid curve with points in [1, max_points].
inline AleCurve random_curve(Rng& rng, const std::string& task_id, std::size_t max_points) {
  const std::size_t k = 1 + static_cast<std::size_t>(rng.uniform_below(max_points));
  std::vector<double> knots(k);
  double x = rng.uniform_open01() * 4.0 - 2.0;
  for (std::size_t i = 0; i < k; ++i) {
    knots[i] = x;
    x += 0.05 + rng.uniform_open01();
  }
  std::vector<double> values(k);
  for (double& v : values) v = rng.normal();
  std::vector<std::size_t> counts(k);
  std::size_t total = 0;
  for (auto& c : counts) {
    c = rng.uniform_below(30);
    total += c;
  }
  if (total == 0) counts[0] = 1;
  return AleCurve(task_id, "f", std::move(knots), std::move(values), floor_proportions(counts),
                  GridKind::common);
}

inline Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = lo + (hi - lo) * rng.uniform_open01();
  }
  return m;
}

}  // namespace mtsim::test
