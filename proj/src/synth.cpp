#include "mtsim/synth.hpp"

#include <cmath>
#include <numbers>

#include "mtsim/rng.hpp"

namespace mtsim {

double rastrigin(double x1, double x2) {
  const double two_pi = 2.0 * std::numbers::pi;
  return 20.0 + (x1 * x1 - 10.0 * std::cos(two_pi * x1)) +
         (x2 * x2 - 10.0 * std::cos(two_pi * x2));
}

double quadratic_form(double x4, double x5, int a, int b, int c) {
  return a * x4 * x4 + b * x5 * x5 + c * x4 * x5;
}

namespace {

void check_spec(const TaskSpec& spec) {
  if (spec.task_id.empty()) throw ValidationError("TaskSpec: empty task_id");
  if (spec.n < 2) throw ValidationError("TaskSpec(" + spec.task_id + "): n must be >= 2");
  auto pm1 = [](int v) { return v == 1 || v == -1; };
  if (!pm1(spec.a) || !pm1(spec.b) || !pm1(spec.c)) {
    throw ValidationError("TaskSpec(" + spec.task_id + "): coefficients must be -1 or 1");
  }
}

struct Standardizer {
  double mean = 0.0;
  double sdev = 1.0;
  double operator()(double x) const { return (x - mean) / sdev; }
};

Standardizer fit_standardizer(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  if (!(var > 0.0)) throw NumericError("synthetic target component has zero variance");
  return {mean, std::sqrt(var)};
}

struct Generated {
  TaskDataset data;
  Standardizer rast;
  Standardizer quad;
};

constexpr double kMixtureStd = 0.1;

Generated generate_full(const TaskSpec& spec) {
  check_spec(spec);
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  Matrix samples(n, 5);

  // Cholesky factor of [[2, 1], [1, 2]].
  const double l11 = std::sqrt(2.0);
  const double l21 = 1.0 / std::sqrt(2.0);
  const double l22 = std::sqrt(1.5);

  auto mixture = [&rng, &spec] {
    const double mu = rng.uniform_open01() < 0.5 ? spec.mixture_mu1 : spec.mixture_mu2;
    return mu + kMixtureStd * rng.normal();
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    samples(i, 0) = l11 * z1;
    samples(i, 1) = l21 * z1 + l22 * z2;
    samples(i, 2) = rng.uniform_open01();
    samples(i, 3) = mixture();
    samples(i, 4) = mixture();
  }

  std::vector<double> rast_vals(n);
  std::vector<double> quad_vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    rast_vals[i] = rastrigin(samples(i, 0), samples(i, 1));
    quad_vals[i] = quadratic_form(samples(i, 3), samples(i, 4), spec.a, spec.b, spec.c);
  }
  const Standardizer rast = fit_standardizer(rast_vals);
  const Standardizer quad = fit_standardizer(quad_vals);

  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) targets[i] = rast(rast_vals[i]) + quad(quad_vals[i]);

  TaskDataset data = validate_dataset(spec.task_id, {"X1", "X2", "X3", "X4", "X5"},
                                      std::move(samples), std::move(targets));
  return {std::move(data), rast, quad};
}

}  // namespace

std::vector<TaskSpec> synthetic_suite(std::uint64_t base_seed, std::size_t n,
                                      bool with_degraded) {
  std::vector<TaskSpec> specs = {
      {"task_1", 0.0, 0.0, 1, 1, 1, n, base_seed + 1},
      {"task_2", 0.0, 0.0, 1, 1, -1, n, base_seed + 2},
      {"task_3", -0.25, 0.25, 1, -1, 1, n, base_seed + 3},
      {"task_4", 0.0, 0.0, -1, 1, 1, n, base_seed + 4},
      {"task_5", -0.25, 0.25, -1, -1, 1, n, base_seed + 5},
  };
  if (with_degraded) specs.push_back({"task_6", 0.0, 0.0, 1, 1, 1, n, base_seed + 6});
  return specs;
}

TaskDataset generate_task(const TaskSpec& spec) { return generate_full(spec).data; }

Predictor oracle_model(const TaskSpec& spec) {
  const Generated gen = generate_full(spec);
  const Standardizer rast = gen.rast;
  const Standardizer quad = gen.quad;
  const int a = spec.a, b = spec.b, c = spec.c;
  auto fn = [rast, quad, a, b, c](const Matrix& batch) {
    std::vector<double> out(batch.rows());
    for (std::size_t i = 0; i < batch.rows(); ++i) {
      const auto row = batch.row(i);
      out[i] = rast(rastrigin(row[0], row[1])) + quad(quadratic_form(row[3], row[4], a, b, c));
    }
    return out;
  };
  return Predictor{spec.task_id, 5, std::move(fn)};
}

Predictor degraded_model(const TaskSpec& spec, const TaskDataset& data) {
  check_spec(spec);
  const auto j4 = data.feature_index("X4");
  const auto j5 = data.feature_index("X5");
  if (!j4 || !j5) {
    throw ValidationError("degraded_model(" + data.task_id() + "): needs features X4 and X5");
  }
  constexpr std::size_t kBins = 4;
  const Partition p4 = equal_width_partition("X4", data.column(*j4), kBins);
  const Partition p5 = equal_width_partition("X5", data.column(*j5), kBins);

  double global = 0.0;
  for (double y : data.targets()) global += y;
  global /= static_cast<double>(data.n());

  std::vector<double> cell_sum(kBins * kBins, 0.0);
  std::vector<std::size_t> cell_count(kBins * kBins, 0);
  for (std::size_t i = 0; i < data.n(); ++i) {
    const std::size_t b4 = bin_index(data.samples()(i, *j4), p4.edges());
    const std::size_t b5 = bin_index(data.samples()(i, *j5), p5.edges());
    cell_sum[b4 * kBins + b5] += data.targets()[i];
    ++cell_count[b4 * kBins + b5];
  }
  std::vector<double> cell_mean(kBins * kBins, global);
  for (std::size_t cidx = 0; cidx < cell_mean.size(); ++cidx) {
    if (cell_count[cidx] > 0) {
      cell_mean[cidx] = cell_sum[cidx] / static_cast<double>(cell_count[cidx]);
    }
  }

  const std::size_t c4 = *j4;
  const std::size_t c5 = *j5;
  const std::size_t dim = data.d();
  auto e4 = p4.edges();
  auto e5 = p5.edges();
  auto fn = [cell_mean, e4, e5, c4, c5](const Matrix& batch) {
    std::vector<double> out(batch.rows());
    for (std::size_t i = 0; i < batch.rows(); ++i) {
      const std::size_t b4 = bin_index(batch(i, c4), e4);
      const std::size_t b5 = bin_index(batch(i, c5), e5);
      out[i] = cell_mean[b4 * kBins + b5];
    }
    return out;
  };
  return Predictor{data.task_id(), dim, std::move(fn)};
}

}  // namespace mtsim
