#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "mtsim/frechet.hpp"
#include "mtsim/rng.hpp"

using namespace mtsim;

namespace {

AleCurve curve_of(std::vector<double> knots, std::vector<double> values,
                  std::vector<double> proportions) {
  return AleCurve("t", "f", std::move(knots), std::move(values), std::move(proportions),
                  GridKind::common);
}

// Unweighted sum-variant discrete Frechet distance, for the omega == 1 check.
double unweighted_sum_frechet(const AleCurve& a, const AleCurve& b) {
  const std::size_t p = a.size();
  const std::size_t q = b.size();
  std::vector<double> dp(p * q);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const double dx = a.knots()[i] - b.knots()[j];
      const double dy = a.values()[i] - b.values()[j];
      const double d = std::sqrt(dx * dx + dy * dy);
      double best = 0.0;
      if (i > 0 && j > 0) {
        best = std::min({dp[(i - 1) * q + j], dp[i * q + j - 1], dp[(i - 1) * q + j - 1]});
      } else if (i > 0) {
        best = dp[(i - 1) * q + j];
      } else if (j > 0) {
        best = dp[i * q + j - 1];
      }
      dp[i * q + j] = best + d;
    }
  }
  return dp[p * q - 1];
}

}  // namespace

TEST_CASE("weight_ratio is max over min") {
  CHECK(weight_ratio(0.2, 0.2) == 1.0);
  CHECK(weight_ratio(0.1, 0.4) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(weight_ratio(0.5, 0.05) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(weight_ratio(0.3, 0.7) == weight_ratio(0.7, 0.3));
  CHECK_THROWS_AS(weight_ratio(0.0, 0.5), ValidationError);
  CHECK_THROWS_AS(weight_ratio(0.5, 1.5), ValidationError);
}

TEST_CASE("weighted_frechet of identical curves is zero") {
  const AleCurve a = curve_of({0.0, 1.0, 2.0}, {0.1, -0.2, 0.1}, {0.2, 0.5, 0.3});
  CHECK(weighted_frechet(a, a) == 0.0);
  // Identical (knot, value) sequences with different proportions still give 0.
  const AleCurve b = curve_of({0.0, 1.0, 2.0}, {0.1, -0.2, 0.1}, {0.5, 0.25, 0.25});
  CHECK(weighted_frechet(a, b) == 0.0);
}

TEST_CASE("weighted_frechet of single-point curves is the weighted distance") {
  const AleCurve a = curve_of({0.0}, {0.0}, {1.0});
  const AleCurve b = curve_of({3.0}, {4.0}, {1.0});
  CHECK(weighted_frechet(a, b) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("weighted_frechet matches the enumerated 2x2 example") {
  const AleCurve a = curve_of({0.0, 1.0}, {0.0, 0.0}, {0.5, 0.5});
  const AleCurve b = curve_of({0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5});
  CHECK(weighted_frechet(a, b) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(brute_force_frechet(a, b) == doctest::Approx(2.0).epsilon(1e-15));

  const AleCurve c = curve_of({0.0, 1.0, 2.0}, {0.3, -0.1, 0.4}, {0.2, 0.5, 0.3});
  CHECK(brute_force_frechet(c, c) == 0.0);
}

TEST_CASE("weighted_frechet is exactly symmetric") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const AleCurve a = mtsim::test::random_curve(rng, "a", 9);
    const AleCurve b = mtsim::test::random_curve(rng, "b", 9);
    CHECK(weighted_frechet(a, b) == weighted_frechet(b, a));
    CHECK(frechet_min_variant(a, b) == frechet_min_variant(b, a));
  }
}

TEST_CASE("weighted_frechet is positive for distinct vertex sequences") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const AleCurve a = mtsim::test::random_curve(rng, "a", 6);
    std::vector<double> bumped = a.values();
    bumped[rng.uniform_below(bumped.size())] += 0.5 + rng.uniform_open01();
    const AleCurve b("t", "f", a.knots(), bumped, a.proportions(), GridKind::common);
    CHECK(weighted_frechet(a, b) > 0.0);
  }
}

TEST_CASE("equal proportions reduce the weighted distance to the unweighted one") {
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t k = 1 + rng.uniform_below(7);
    const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
    auto make = [&] {
      std::vector<double> knots(k);
      std::vector<double> values(k);
      double x = rng.uniform_open01();
      for (std::size_t i = 0; i < k; ++i) {
        knots[i] = x;
        x += 0.1 + rng.uniform_open01();
        values[i] = rng.normal();
      }
      return AleCurve("t", "f", std::move(knots), std::move(values), uniform, GridKind::common);
    };
    const AleCurve ua = make();
    const AleCurve ub = make();
    CHECK(weighted_frechet(ua, ub) == doctest::Approx(unweighted_sum_frechet(ua, ub)));
  }
}

TEST_CASE("DP equals brute-force enumeration on curves with <= 7 points") {
  Rng rng(53);
  for (int trial = 0; trial < 500; ++trial) {
    const AleCurve a = mtsim::test::random_curve(rng, "a", 7);
    const AleCurve b = mtsim::test::random_curve(rng, "b", 7);
    const double dp = weighted_frechet(a, b);
    const double bf = brute_force_frechet(a, b);
    CHECK(std::abs(dp - bf) <= 1e-12);
  }
}

TEST_CASE("brute force enforces its size cap") {
  std::vector<double> knots(8);
  std::vector<double> values(8, 0.0);
  std::vector<std::size_t> counts(8, 1);
  for (std::size_t i = 0; i < 8; ++i) knots[i] = static_cast<double>(i);
  const AleCurve big("t", "f", knots, values, floor_proportions(counts), GridKind::common);
  const AleCurve small = curve_of({0.0}, {0.0}, {1.0});
  CHECK_THROWS_AS(brute_force_frechet(big, small), ValidationError);
}

TEST_CASE("min variant equals the single pair distance for single-point curves") {
  const AleCurve a = curve_of({0.0}, {0.0}, {1.0});
  const AleCurve b = curve_of({3.0}, {4.0}, {1.0});
  CHECK(frechet_min_variant(a, b) == doctest::Approx(5.0));
  CHECK(frechet_min_variant(a, a) == 0.0);
}

TEST_CASE("sum variant separates curves the min variant cannot") {
  // C1: gentle wave. C3: same wave, only the extreme knots pushed up by 3.
  // C2: the whole wave offset by 3.
  const std::size_t k = 20;
  std::vector<double> knots(k);
  std::vector<double> base(k);
  for (std::size_t i = 0; i < k; ++i) {
    knots[i] = static_cast<double>(i);
    base[i] = 0.5 * std::sin(0.7 * static_cast<double>(i));
  }
  std::vector<double> offset = base;
  for (double& v : offset) v += 3.0;
  std::vector<double> extremes = base;
  extremes.front() += 3.0;
  extremes.back() += 3.0;
  const std::vector<double> uniform(k, 1.0 / static_cast<double>(k));
  const AleCurve c1("t", "f", knots, base, uniform, GridKind::common);
  const AleCurve c2("t", "f", knots, offset, uniform, GridKind::common);
  const AleCurve c3("t", "f", knots, extremes, uniform, GridKind::common);

  CHECK(frechet_min_variant(c1, c2) == frechet_min_variant(c1, c3));
  CHECK(weighted_frechet(c1, c3) < 0.25 * weighted_frechet(c1, c2));
}

TEST_CASE("knot-axis normalization rescales only the x coordinate") {
  const AleCurve a = curve_of({0.0}, {0.0}, {1.0});
  const AleCurve b = curve_of({1000.0}, {0.0}, {1.0});
  CHECK(weighted_frechet(a, b) == doctest::Approx(1000.0));
  CHECK(weighted_frechet(a, b, true) == doctest::Approx(1.0));
  CHECK(frechet_min_variant(a, b, true) == doctest::Approx(1.0));
}
