#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mtsim/importance.hpp"
#include "mtsim/models.hpp"
#include "mtsim/rng.hpp"

using namespace mtsim;

namespace {

TaskDataset grid_1d(std::size_t n, double slope) {
  Matrix samples(n, 1);
  std::vector<double> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n - 1);
    samples(i, 0) = x;
    targets[i] = slope * x;
  }
  return validate_dataset("t", {"x"}, std::move(samples), std::move(targets));
}

}  // namespace

TEST_CASE("default_k is max(5, n/100)") {
  CHECK(default_k(200) == 5);
  CHECK(default_k(10000) == 100);
}

TEST_CASE("fit_knn with k = n predicts the target mean everywhere") {
  const TaskDataset data = grid_1d(20, 2.0);
  const Predictor f = fit_knn(data, 20);
  double mean = 0.0;
  for (double y : data.targets()) mean += y;
  mean /= 20.0;
  Matrix query(1, 1);
  query(0, 0) = 0.123;
  CHECK(f.predict(query)[0] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("fit_knn with k = 1 reproduces training targets at training points") {
  const TaskDataset data = grid_1d(30, 2.0);
  const Predictor f = fit_knn(data, 1);
  const std::vector<double> preds = f.predict(data.samples());
  for (std::size_t i = 0; i < data.n(); ++i) CHECK(preds[i] == data.targets()[i]);
}

TEST_CASE("fit_knn tracks a linear function on a dense grid") {
  const TaskDataset data = grid_1d(201, 2.0);
  const Predictor f = fit_knn(data, 3);
  Matrix query(1, 1);
  for (double x : {0.2, 0.35, 0.5, 0.65, 0.8}) {
    query(0, 0) = x;
    CHECK(std::abs(f.predict(query)[0] - 2.0 * x) <= 0.1);
  }
}

TEST_CASE("fit_knn predictions stay within the target range") {
  Rng rng(61);
  Matrix samples = mtsim::test::random_matrix(rng, 50, 3, -1.0, 1.0);
  std::vector<double> targets(50);
  for (double& y : targets) y = rng.normal();
  const TaskDataset data = validate_dataset("t", {"a", "b", "c"}, samples, targets);
  const auto [lo, hi] = std::minmax_element(targets.begin(), targets.end());
  const Predictor f = fit_knn(data, 7);
  Matrix queries = mtsim::test::random_matrix(rng, 40, 3, -2.0, 2.0);
  for (double p : f.predict(queries)) {
    CHECK(p >= *lo);
    CHECK(p <= *hi);
  }
}

TEST_CASE("fit_knn rejects k outside [1, n]") {
  const TaskDataset data = grid_1d(10, 1.0);
  CHECK_THROWS_AS(fit_knn(data, 11), ValidationError);
  CHECK_THROWS_AS(fit_knn(data, 0), ValidationError);
}

TEST_CASE("rmse matches hand values") {
  const TaskDataset data = validate_dataset("t", {"x"}, Matrix(2, 1, 0.0), {3.0, -3.0});
  const Predictor zero{"t", 1, [](const Matrix& b) { return std::vector<double>(b.rows(), 0.0); }};
  CHECK(rmse(zero, data) == doctest::Approx(3.0));

  const TaskDataset data2 = validate_dataset("t", {"x"}, Matrix(2, 1, 0.0), {0.0, 2.0});
  const Predictor mean{"t", 1, [](const Matrix& b) { return std::vector<double>(b.rows(), 1.0); }};
  CHECK(rmse(mean, data2) == doctest::Approx(1.0));

  const Predictor perfect{"t", 1, [&](const Matrix& b) {
    std::vector<double> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = data.targets()[i];
    return out;
  }};
  CHECK(rmse(perfect, data) == 0.0);
}

TEST_CASE("rmse is invariant to sample order") {
  Rng rng(67);
  Matrix samples = mtsim::test::random_matrix(rng, 40, 2, 0.0, 1.0);
  std::vector<double> targets(40);
  for (double& y : targets) y = rng.normal();
  const TaskDataset data = validate_dataset("t", {"a", "b"}, samples, targets);
  const Predictor f{"t", 2, [](const Matrix& b) {
    std::vector<double> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = b(i, 0) + b(i, 1);
    return out;
  }};
  const double base = rmse(f, data);

  const std::vector<std::size_t> perm = rng.permutation(40);
  Matrix shuffled(40, 2);
  std::vector<double> shuffled_targets(40);
  for (std::size_t i = 0; i < 40; ++i) {
    shuffled(i, 0) = samples(perm[i], 0);
    shuffled(i, 1) = samples(perm[i], 1);
    shuffled_targets[i] = targets[perm[i]];
  }
  const TaskDataset reordered = validate_dataset("t", {"a", "b"}, shuffled, shuffled_targets);
  CHECK(std::abs(rmse(f, reordered) - base) <= 1e-12);
}

TEST_CASE("empirical_loss uses log-loss only for binary targets") {
  const TaskDataset binary = validate_dataset("t", {"x"}, Matrix(4, 1, 0.0),
                                              {0.0, 1.0, 1.0, 0.0});
  CHECK(has_binary_targets(binary));
  const Predictor half{"t", 1, [](const Matrix& b) {
    return std::vector<double>(b.rows(), 0.5);
  }};
  CHECK(empirical_loss(half, binary) == doctest::Approx(-std::log(0.5)));

  const TaskDataset cont = validate_dataset("t", {"x"}, Matrix(2, 1, 0.0), {0.0, 0.5});
  CHECK_FALSE(has_binary_targets(cont));
  CHECK_THROWS_AS(log_loss(half, cont), ValidationError);
}

TEST_CASE("log_loss survives extreme predictions via clipping") {
  const TaskDataset binary = validate_dataset("t", {"x"}, Matrix(2, 1, 0.0), {0.0, 1.0});
  const Predictor hard{"t", 1, [](const Matrix& b) {
    std::vector<double> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = i == 0 ? 1.0 : 0.0;
    return out;
  }};
  CHECK(std::isfinite(log_loss(hard, binary)));
}

TEST_CASE("permutation importance isolates the only used feature") {
  Rng rng(71);
  Matrix samples = mtsim::test::random_matrix(rng, 100, 2, 0.0, 1.0);
  std::vector<double> targets(100);
  for (std::size_t i = 0; i < 100; ++i) targets[i] = 2.0 * samples(i, 0);
  const TaskDataset data = validate_dataset("t", {"x1", "x2"}, samples, targets);
  const Predictor f{"t", 2, [](const Matrix& b) {
    std::vector<double> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = 2.0 * b(i, 0);
    return out;
  }};
  const PfiResult result = permutation_importance_detail(f, data, 5, 123);
  CHECK(result.raw.at("x2") <= 1e-6);
  CHECK(result.normalized.at("x1") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.normalized.at("x2") <= 1e-9);
}

TEST_CASE("permutation importance of a constant model is uniform") {
  Rng rng(73);
  Matrix samples = mtsim::test::random_matrix(rng, 50, 3, 0.0, 1.0);
  std::vector<double> targets(50, 0.0);
  for (double& y : targets) y = rng.normal();
  const TaskDataset data = validate_dataset("t", {"a", "b", "c"}, samples, targets);
  const Predictor f{"t", 3, [](const Matrix& b) { return std::vector<double>(b.rows(), 1.0); }};
  const auto importance = permutation_importance(f, data, 5, 9);
  for (const auto& [name, v] : importance) CHECK(v == doctest::Approx(1.0 / 3));
}

TEST_CASE("permutation importance always sums to 1 and reproduces per seed") {
  Rng rng(79);
  Matrix samples = mtsim::test::random_matrix(rng, 60, 3, -1.0, 1.0);
  std::vector<double> targets(60);
  for (std::size_t i = 0; i < 60; ++i) {
    targets[i] = samples(i, 0) + 0.3 * samples(i, 1) * samples(i, 2);
  }
  const TaskDataset data = validate_dataset("t", {"a", "b", "c"}, samples, targets);
  const Predictor f{"t", 3, [](const Matrix& b) {
    std::vector<double> out(b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) out[i] = b(i, 0) + 0.3 * b(i, 1) * b(i, 2);
    return out;
  }};
  const auto first = permutation_importance(f, data, 5, 2024);
  const auto second = permutation_importance(f, data, 5, 2024);
  CHECK(first == second);
  double sum = 0.0;
  for (const auto& [name, v] : first) sum += v;
  CHECK(std::abs(sum - 1.0) <= 1e-9);
}

TEST_CASE("permutation importance requires at least 10 samples") {
  const TaskDataset tiny = grid_1d(5, 1.0);
  const Predictor f{"t", 1, [](const Matrix& b) { return std::vector<double>(b.rows(), 0.0); }};
  CHECK_THROWS_AS(permutation_importance(f, tiny, 5, 1), ValidationError);
}

TEST_CASE("manual importance normalizes and validates") {
  const auto even = manual_importance({{"a", 2.0}, {"b", 2.0}});
  CHECK(even.at("a") == doctest::Approx(0.5));
  const auto spike = manual_importance({{"a", 1.0}, {"b", 0.0}, {"c", 0.0}});
  CHECK(spike.at("a") == doctest::Approx(1.0));
  CHECK(spike.at("b") == 0.0);
  const auto uneven = manual_importance({{"a", 3.0}, {"b", 1.0}});
  CHECK(uneven.at("a") == doctest::Approx(0.75));
  CHECK(uneven.at("b") == doctest::Approx(0.25));
  CHECK_THROWS_AS(manual_importance({{"a", 0.0}, {"b", 0.0}}), ValidationError);
  CHECK_THROWS_AS(manual_importance({{"a", -1.0}, {"b", 2.0}}), ValidationError);
}

TEST_CASE("manual importance is scale invariant") {
  Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    std::map<std::string, double> weights;
    for (int j = 0; j < 4; ++j) {
      weights["f" + std::to_string(j)] = rng.uniform_open01() * 5.0;
    }
    const double c = 0.01 + rng.uniform_open01() * 100.0;
    std::map<std::string, double> scaled;
    for (const auto& [name, v] : weights) scaled[name] = c * v;
    const auto base = manual_importance(weights);
    const auto rescaled = manual_importance(scaled);
    for (const auto& [name, v] : base) CHECK(std::abs(rescaled.at(name) - v) <= 1e-12);
  }
}
