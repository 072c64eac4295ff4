#include "mtsim/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mtsim {

Dendrogram::Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges)
    : leaves_(std::move(leaves)), merges_(std::move(merges)) {
  const std::size_t t = leaves_.size();
  if (t < 2) throw ValidationError("Dendrogram: needs at least 2 leaves");
  if (merges_.size() != t - 1) {
    throw ValidationError("Dendrogram: " + std::to_string(merges_.size()) + " merges for " +
                          std::to_string(t) + " leaves");
  }
  double prev = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < merges_.size(); ++m) {
    const Merge& mg = merges_[m];
    if (mg.a >= mg.b || mg.b >= t + m) {
      throw ValidationError("Dendrogram: invalid cluster ids at merge " + std::to_string(m));
    }
    if (!std::isfinite(mg.height) || mg.height + 1e-12 < prev) {
      throw ValidationError("Dendrogram: heights must be finite and non-decreasing");
    }
    prev = mg.height;
  }
}

SimilarityMatrix symmetrize(const SimilarityMatrix& matrix) {
  const std::size_t t = matrix.size();
  Matrix out(t, t, 0.0);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      if (i != j) out(i, j) = 0.5 * (matrix.value(i, j) + matrix.value(j, i));
    }
  }
  return SimilarityMatrix(matrix.task_ids(), std::move(out), matrix.scaled(), matrix.matching());
}

Dendrogram ward_cluster(const SimilarityMatrix& matrix) {
  const std::size_t t = matrix.size();
  if (t < 2) throw ValidationError("ward_cluster: needs at least 2 tasks");
  const double scale = [&] {
    double m = 1.0;
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t j = 0; j < t; ++j) m = std::max(m, std::abs(matrix.value(i, j)));
    return m;
  }();
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      if (std::abs(matrix.value(i, j) - matrix.value(j, i)) > 1e-9 * scale) {
        throw ValidationError("ward_cluster: matrix is not symmetric at (" +
                              matrix.task_ids()[i] + ", " + matrix.task_ids()[j] + ")");
      }
    }
  }

  // Active clusters keyed by creation-order id; distances kept in a dense map
  // over active ids. Fine for desk-scale T.
  struct Cluster {
    std::size_t id;
    std::size_t size;
  };
  std::vector<Cluster> active;
  active.reserve(t);
  for (std::size_t i = 0; i < t; ++i) active.push_back({i, 1});

  std::vector<std::vector<double>> dist(t, std::vector<double>(t, 0.0));
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) dist[i][j] = 0.5 * (matrix.value(i, j) + matrix.value(j, i));

  auto grow = [](std::vector<std::vector<double>>& m) {
    for (auto& row : m) row.push_back(0.0);
    m.emplace_back(m.size() + 1, 0.0);
  };

  std::vector<Merge> merges;
  merges.reserve(t - 1);
  for (std::size_t step = 0; step + 1 < t; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < active.size(); ++x) {
      for (std::size_t y = x + 1; y < active.size(); ++y) {
        const double d = dist[active[x].id][active[y].id];
        if (d < best) {
          best = d;
          bi = x;
          bj = y;
        }
      }
    }
    const Cluster ca = active[bi];
    const Cluster cb = active[bj];
    const std::size_t new_id = t + step;
    merges.push_back({std::min(ca.id, cb.id), std::max(ca.id, cb.id), best, ca.size + cb.size});

    grow(dist);
    const double dij2 = best * best;
    for (std::size_t x = 0; x < active.size(); ++x) {
      if (x == bi || x == bj) continue;
      const Cluster& ck = active[x];
      const double dik2 = dist[ca.id][ck.id] * dist[ca.id][ck.id];
      const double djk2 = dist[cb.id][ck.id] * dist[cb.id][ck.id];
      const double ni = static_cast<double>(ca.size);
      const double nj = static_cast<double>(cb.size);
      const double nk = static_cast<double>(ck.size);
      const double d2 =
          ((ni + nk) * dik2 + (nj + nk) * djk2 - nk * dij2) / (ni + nj + nk);
      const double d = std::sqrt(std::max(0.0, d2));
      dist[new_id][ck.id] = d;
      dist[ck.id][new_id] = d;
    }

    active.erase(active.begin() + bj);
    active.erase(active.begin() + bi);
    active.push_back({new_id, merges.back().size});
  }
  return Dendrogram(matrix.task_ids(), std::move(merges));
}

namespace {

// Root id of the cluster containing each leaf after applying `steps` merges.
std::vector<std::size_t> roots_after(const Dendrogram& dendro, std::size_t steps) {
  const std::size_t t = dendro.leaf_count();
  std::vector<std::size_t> parent(t + steps);
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  for (std::size_t m = 0; m < steps; ++m) {
    parent[dendro.merges()[m].a] = t + m;
    parent[dendro.merges()[m].b] = t + m;
  }
  std::vector<std::size_t> root(t);
  for (std::size_t i = 0; i < t; ++i) {
    std::size_t r = i;
    while (parent[r] != r) r = parent[r];
    root[i] = r;
  }
  return root;
}

}  // namespace

std::map<std::string, std::size_t> cut_tree(const Dendrogram& dendro, std::size_t k) {
  const std::size_t t = dendro.leaf_count();
  if (k == 0 || k > t) {
    throw ValidationError("cut_tree: k must lie in [1, " + std::to_string(t) + "]");
  }
  const std::vector<std::size_t> root = roots_after(dendro, t - k);
  std::map<std::size_t, std::size_t> label_of_root;
  std::map<std::string, std::size_t> labels;
  std::size_t next = 1;
  for (std::size_t i = 0; i < t; ++i) {
    auto [it, inserted] = label_of_root.try_emplace(root[i], next);
    if (inserted) ++next;
    labels[dendro.leaves()[i]] = it->second;
  }
  return labels;
}

namespace {

void write_newick(const Dendrogram& dendro, std::size_t id, double parent_height,
                  std::ostream& os) {
  const std::size_t t = dendro.leaf_count();
  double height = 0.0;
  if (id < t) {
    os << dendro.leaves()[id];
  } else {
    const Merge& m = dendro.merges()[id - t];
    height = m.height;
    os << '(';
    write_newick(dendro, m.a, height, os);
    os << ',';
    write_newick(dendro, m.b, height, os);
    os << ')';
  }
  os << ':' << parent_height - height;
}

void collect_leaves(const Dendrogram& dendro, std::size_t id, std::vector<std::size_t>& out) {
  const std::size_t t = dendro.leaf_count();
  if (id < t) {
    out.push_back(id);
    return;
  }
  const Merge& m = dendro.merges()[id - t];
  collect_leaves(dendro, m.a, out);
  collect_leaves(dendro, m.b, out);
}

}  // namespace

std::string to_newick(const Dendrogram& dendro) {
  std::ostringstream os;
  const Merge& top = dendro.merges().back();
  os << '(';
  write_newick(dendro, top.a, top.height, os);
  os << ',';
  write_newick(dendro, top.b, top.height, os);
  os << ");";
  return os.str();
}

std::vector<std::size_t> leaf_order(const Dendrogram& dendro) {
  std::vector<std::size_t> out;
  out.reserve(dendro.leaf_count());
  collect_leaves(dendro, dendro.leaf_count() + dendro.merges().size() - 1, out);
  return out;
}

}  // namespace mtsim
