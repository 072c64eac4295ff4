#pragma once

#include <map>
#include <string>
#include <vector>

#include "mtsim/core.hpp"

namespace mtsim {

/// One agglomeration step. Cluster ids follow the usual convention: leaves
/// are 0..T-1 and the cluster created by merge step m (0-based) gets id T+m.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;      // a < b
  double height = 0.0;    // inter-cluster distance at merge time
  std::size_t size = 0;   // size of the new cluster
};

/// Merge tree from agglomerative clustering: T-1 merges over T leaves with
/// non-decreasing heights.
class Dendrogram {
 public:
  Dendrogram(std::vector<std::string> leaves, std::vector<Merge> merges);

  const std::vector<std::string>& leaves() const { return leaves_; }
  const std::vector<Merge>& merges() const { return merges_; }
  std::size_t leaf_count() const { return leaves_.size(); }

 private:
  std::vector<std::string> leaves_;
  std::vector<Merge> merges_;
};

/// Averages opposite entries: (d_ij + d_ji)/2 with a zero diagonal. delta may
/// be asymmetric; Ward needs a dissimilarity.
SimilarityMatrix symmetrize(const SimilarityMatrix& matrix);

/// Agglomerative clustering with Ward's linkage via the Lance-Williams
/// update, treating matrix entries as distances. The merge pair is the
/// minimum current distance; ties break toward the lowest index pair.
Dendrogram ward_cluster(const SimilarityMatrix& matrix);

/// Flat cut after T-k merges. Labels 1..k are assigned in order of first
/// appearance over the leaves.
std::map<std::string, std::size_t> cut_tree(const Dendrogram& dendro, std::size_t k);

/// Nested newick-like rendering, one line, terminated by ';'. Branch lengths
/// are the height gained from child to parent.
std::string to_newick(const Dendrogram& dendro);

/// Left-to-right leaf order induced by the merge tree (for plotting).
std::vector<std::size_t> leaf_order(const Dendrogram& dendro);

}  // namespace mtsim
