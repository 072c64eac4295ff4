#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mtsim/clustering.hpp"
#include "mtsim/rng.hpp"

using namespace mtsim;

namespace {

SimilarityMatrix matrix_of(std::vector<std::string> ids, const std::vector<double>& upper) {
  const std::size_t t = ids.size();
  Matrix m(t, t, 0.0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      m(i, j) = upper[idx];
      m(j, i) = upper[idx];
      ++idx;
    }
  }
  return SimilarityMatrix(std::move(ids), std::move(m), false, Matching::by_name);
}

}  // namespace

TEST_CASE("symmetrize averages opposite entries") {
  Matrix m(2, 2, 0.0);
  m(0, 1) = 2.0;
  m(1, 0) = 4.0;
  const SimilarityMatrix asym({"a", "b"}, m, false, Matching::by_name);
  const SimilarityMatrix sym = symmetrize(asym);
  CHECK(sym.value(0, 1) == 3.0);
  CHECK(sym.value(1, 0) == 3.0);

  const SimilarityMatrix zero({"a", "b"}, Matrix(2, 2, 0.0), false, Matching::by_name);
  CHECK(symmetrize(zero).value(0, 1) == 0.0);

  const SimilarityMatrix already = matrix_of({"a", "b", "c"}, {1.0, 2.0, 3.0});
  const SimilarityMatrix again = symmetrize(already);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(again.value(i, j) == already.value(i, j));
  }
}

TEST_CASE("ward_cluster merges the closest pair first") {
  const SimilarityMatrix m = matrix_of({"t1", "t2", "t3"}, {1.0, 10.0, 10.0});
  const Dendrogram dendro = ward_cluster(m);
  REQUIRE(dendro.merges().size() == 2);
  CHECK(dendro.merges()[0].a == 0);
  CHECK(dendro.merges()[0].b == 1);
  CHECK(dendro.merges()[0].height == doctest::Approx(1.0));
  CHECK(dendro.merges()[0].size == 2);
  // Ward update: sqrt((2*100 + 2*100 - 1)/3).
  CHECK(dendro.merges()[1].height == doctest::Approx(std::sqrt(399.0 / 3.0)));

  const auto labels = cut_tree(dendro, 2);
  CHECK(labels.at("t1") == labels.at("t2"));
  CHECK(labels.at("t1") != labels.at("t3"));
}

TEST_CASE("two tasks merge at their distance") {
  const SimilarityMatrix m = matrix_of({"a", "b"}, {7.25});
  const Dendrogram dendro = ward_cluster(m);
  REQUIRE(dendro.merges().size() == 1);
  CHECK(dendro.merges()[0].height == doctest::Approx(7.25));
}

TEST_CASE("ward_cluster rejects non-symmetric matrices") {
  Matrix m(2, 2, 0.0);
  m(0, 1) = 1.0;
  m(1, 0) = 2.0;
  const SimilarityMatrix asym({"a", "b"}, m, false, Matching::by_name);
  CHECK_THROWS_AS(ward_cluster(asym), ValidationError);
}

TEST_CASE("cut_tree covers the edge cases") {
  const SimilarityMatrix m = matrix_of({"t1", "t2", "t3"}, {1.0, 10.0, 10.0});
  const Dendrogram dendro = ward_cluster(m);
  const auto all_separate = cut_tree(dendro, 3);
  std::set<std::size_t> labels;
  for (const auto& [id, label] : all_separate) labels.insert(label);
  CHECK(labels == std::set<std::size_t>{1, 2, 3});
  const auto one = cut_tree(dendro, 1);
  for (const auto& [id, label] : one) CHECK(label == 1);
  CHECK_THROWS_AS(cut_tree(dendro, 0), ValidationError);
  CHECK_THROWS_AS(cut_tree(dendro, 4), ValidationError);
}

TEST_CASE("cut_tree produces exactly k non-empty clusters") {
  Rng rng(401);
  const std::size_t t = 8;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < t; ++i) ids.push_back("t" + std::to_string(i));
  std::vector<double> upper(t * (t - 1) / 2);
  for (double& v : upper) v = 0.5 + rng.uniform_open01() * 10.0;
  const Dendrogram dendro = ward_cluster(matrix_of(ids, upper));
  for (std::size_t k = 1; k <= t; ++k) {
    const auto labels = cut_tree(dendro, k);
    std::set<std::size_t> distinct;
    for (const auto& [id, label] : labels) distinct.insert(label);
    CHECK(distinct.size() == k);
    for (std::size_t label = 1; label <= k; ++label) CHECK(distinct.count(label) == 1);
  }
}

TEST_CASE("task order does not change the partition when distances are distinct") {
  Rng rng(409);
  const std::size_t t = 6;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < t; ++i) ids.push_back("t" + std::to_string(i));
  std::vector<double> upper(t * (t - 1) / 2);
  double v = 1.0;
  for (double& u : upper) {
    v += 0.37 + rng.uniform_open01();
    u = v;
  }
  std::shuffle(upper.begin(), upper.end(), std::mt19937{2024});

  const SimilarityMatrix base = matrix_of(ids, upper);
  std::vector<std::size_t> perm = Rng(7).permutation(t);
  Matrix reordered(t, t, 0.0);
  std::vector<std::string> reordered_ids(t);
  for (std::size_t i = 0; i < t; ++i) {
    reordered_ids[i] = ids[perm[i]];
    for (std::size_t j = 0; j < t; ++j) reordered(i, j) = base.value(perm[i], perm[j]);
  }
  const SimilarityMatrix shuffled(reordered_ids, reordered, false, Matching::by_name);

  for (std::size_t k = 2; k < t; ++k) {
    const auto a = cut_tree(ward_cluster(base), k);
    const auto b = cut_tree(ward_cluster(shuffled), k);
    // Compare partitions as sets of task-id sets.
    auto groups = [](const std::map<std::string, std::size_t>& labels) {
      std::map<std::size_t, std::set<std::string>> g;
      for (const auto& [id, label] : labels) g[label].insert(id);
      std::set<std::set<std::string>> out;
      for (auto& [label, members] : g) out.insert(members);
      return out;
    };
    CHECK(groups(a) == groups(b));
  }
}

TEST_CASE("dendrogram heights are non-decreasing and serialization mentions all leaves") {
  Rng rng(419);
  const std::size_t t = 7;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < t; ++i) ids.push_back("leaf" + std::to_string(i));
  std::vector<double> upper(t * (t - 1) / 2);
  for (double& v : upper) v = 0.5 + rng.uniform_open01() * 5.0;
  const Dendrogram dendro = ward_cluster(matrix_of(ids, upper));
  for (std::size_t m = 1; m < dendro.merges().size(); ++m) {
    CHECK(dendro.merges()[m].height >= dendro.merges()[m - 1].height - 1e-12);
  }
  const std::string newick = to_newick(dendro);
  for (const auto& id : ids) CHECK(newick.find(id) != std::string::npos);
  CHECK(newick.back() == ';');

  const std::vector<std::size_t> order = leaf_order(dendro);
  std::set<std::size_t> seen(order.begin(), order.end());
  CHECK(order.size() == t);
  CHECK(seen.size() == t);
}

TEST_CASE("Dendrogram validates merge structure") {
  CHECK_THROWS_AS(Dendrogram({"a", "b"}, {}), ValidationError);
  CHECK_THROWS_AS(Dendrogram({"a", "b"}, {{0, 5, 1.0, 2}}), ValidationError);
  CHECK_THROWS_AS(Dendrogram({"a", "b", "c"}, {{0, 1, 2.0, 2}, {2, 3, 1.0, 3}}),
                  ValidationError);
}
