#include "topicgraph/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "topicgraph/common.hpp"

namespace topicgraph {

std::string_view to_string(Linkage l) {
  switch (l) {
    case Linkage::average: return "average";
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
  }
  return "average";
}

Linkage parse_linkage(std::string_view s) {
  if (s == "average") return Linkage::average;
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  throw Error("unknown linkage '" + std::string(s) + "'");
}

Dendrogram build_dendrogram(const Eigen::MatrixXd& correlation, Linkage linkage) {
  const auto k = static_cast<std::size_t>(correlation.rows());
  if (correlation.cols() != correlation.rows()) throw Error("correlation matrix must be square");
  if (k < 2) throw Error("clustering needs at least 2 topics");

  // Distances between active clusters, indexed by slot; slot i starts as leaf i.
  Eigen::MatrixXd dist = 1.0 - correlation.array();
  std::vector<std::size_t> id(k), size(k, 1);
  std::iota(id.begin(), id.end(), 0);
  std::vector<bool> active(k, true);

  Dendrogram d;
  d.leaves = k;
  d.linkage = linkage;
  for (std::size_t step = 0; step + 1 < k; ++step) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_ids{};
    for (std::size_t i = 0; i < k; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if (!active[j]) continue;
        const double v = dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        std::pair<std::size_t, std::size_t> ids = std::minmax(id[i], id[j]);
        if (v < best || (v == best && ids < best_ids)) {
          best = v;
          best_ids = ids;
          bi = i;
          bj = j;
        }
      }
    }
    d.merges.push_back({best_ids.first, best_ids.second, best, size[bi] + size[bj]});

    // Lance-Williams update into slot bi; slot bj retires.
    const double ni = static_cast<double>(size[bi]);
    const double nj = static_cast<double>(size[bj]);
    for (std::size_t m = 0; m < k; ++m) {
      if (!active[m] || m == bi || m == bj) continue;
      const auto mi = static_cast<Eigen::Index>(m);
      const double di = dist(static_cast<Eigen::Index>(bi), mi);
      const double dj = dist(static_cast<Eigen::Index>(bj), mi);
      double v = 0.0;
      switch (linkage) {
        case Linkage::average: v = (ni * di + nj * dj) / (ni + nj); break;
        case Linkage::single: v = std::min(di, dj); break;
        case Linkage::complete: v = std::max(di, dj); break;
      }
      dist(static_cast<Eigen::Index>(bi), mi) = v;
      dist(mi, static_cast<Eigen::Index>(bi)) = v;
    }
    active[bj] = false;
    size[bi] += size[bj];
    id[bi] = k + step;
  }
  return d;
}

std::vector<std::size_t> cut(const Dendrogram& dendrogram, double threshold) {
  const std::size_t k = dendrogram.leaves;
  const std::size_t total = k + dendrogram.merges.size();
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const double limit = 1.0 - threshold;
  for (std::size_t i = 0; i < dendrogram.merges.size(); ++i) {
    const auto& m = dendrogram.merges[i];
    if (m.distance <= limit) {
      parent[find(m.a)] = k + i;
      parent[find(m.b)] = k + i;
    }
  }
  std::vector<std::size_t> group(k);
  std::vector<std::size_t> label(total, total);
  std::size_t next = 0;
  for (std::size_t t = 0; t < k; ++t) {
    auto root = find(t);
    if (label[root] == total) label[root] = next++;
    group[t] = label[root];
  }
  return group;
}

}  // namespace topicgraph
