#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace topicgraph {

enum class Linkage { average, single, complete };

std::string_view to_string(Linkage l);
Linkage parse_linkage(std::string_view s);

// Leaves are topic ids 0..K-1; the i-th merge creates cluster K+i.
struct Merge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double distance = 0.0;
  std::size_t size = 0;  // leaves under the new cluster

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::size_t leaves = 0;
  Linkage linkage = Linkage::average;
  std::vector<Merge> merges;  // K - 1 entries

  bool operator==(const Dendrogram&) const = default;
};

// Agglomerative clustering on d(i, j) = 1 - corr(i, j). Equal distances are
// resolved by the smallest (a, b) cluster-id pair.
Dendrogram build_dendrogram(const Eigen::MatrixXd& correlation, Linkage linkage = Linkage::average);

// Group per topic after applying every merge with distance <= 1 - threshold.
// Groups are numbered 0.. in order of their lowest topic id.
std::vector<std::size_t> cut(const Dendrogram& dendrogram, double threshold);

}  // namespace topicgraph
