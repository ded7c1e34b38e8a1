#include <limits>

#include "topicgraph/abae.hpp"

namespace topicgraph {

namespace {

std::size_t nearest(const Eigen::MatrixXd& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x,
                    double* dist2 = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    double d = (centroids.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<std::size_t>(c);
    }
  }
  if (dist2) *dist2 = best_d;
  return best;
}

Eigen::MatrixXd seed_plus_plus(const Eigen::MatrixXd& points, std::size_t k, Rng& rng) {
  const auto n = static_cast<std::size_t>(points.rows());
  Eigen::MatrixXd centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<bool> chosen(n, false);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t pick = rng.index(n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) total += chosen[i] ? 0.0 : d2[i];
      if (total > 0.0) {
        double target = rng.uniform() * total;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (chosen[i] || d2[i] == 0.0) continue;
          pick = i;
          target -= d2[i];
          if (target < 0.0) break;
        }
      } else {
        // Remaining points coincide with existing centroids.
        pick = 0;
        while (chosen[pick]) ++pick;
      }
    }
    chosen[pick] = true;
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (points.row(static_cast<Eigen::Index>(i)) -
                               centroids.row(static_cast<Eigen::Index>(c))).squaredNorm());
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0) throw Error("k-means needs k >= 1");
  if (k > n)
    throw Error("k-means: k = " + std::to_string(k) + " exceeds the number of points (" +
                std::to_string(n) + ")");

  Rng rng(seed);
  KMeansResult r;
  r.centroids = seed_plus_plus(points, k, rng);
  r.assignment.assign(n, k);
  std::vector<std::size_t> sizes(k, 0);

  auto recompute = [&] {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(r.centroids.rows(), r.centroids.cols());
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums.row(static_cast<Eigen::Index>(r.assignment[i])) += points.row(static_cast<Eigen::Index>(i));
      ++sizes[r.assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
      if (sizes[c] > 0)
        r.centroids.row(static_cast<Eigen::Index>(c)) =
            sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(sizes[c]);
  };

  for (r.iterations = 0; r.iterations < max_iterations; ++r.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      auto c = nearest(r.centroids, points.row(static_cast<Eigen::Index>(i)));
      if (c != r.assignment[i]) {
        r.assignment[i] = c;
        changed = true;
      }
    }
    if (!changed) break;
    recompute();
  }
  recompute();

  // Hartigan refinement: move a point when the exact SSE change is negative.
  bool moved = true;
  for (std::size_t pass = 0; moved && pass < max_iterations; ++pass) {
    moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = points.row(static_cast<Eigen::Index>(i));
      const std::size_t a = r.assignment[i];
      if (sizes[a] <= 1) continue;
      const double na = static_cast<double>(sizes[a]);
      const double removal = na / (na - 1.0) * (x - r.centroids.row(static_cast<Eigen::Index>(a))).squaredNorm();
      std::size_t best = a;
      double best_add = removal;
      for (std::size_t b = 0; b < k; ++b) {
        if (b == a) continue;
        const double nb = static_cast<double>(sizes[b]);
        const double add = nb / (nb + 1.0) * (x - r.centroids.row(static_cast<Eigen::Index>(b))).squaredNorm();
        if (add < best_add - 1e-12 * (1.0 + removal)) {
          best_add = add;
          best = b;
        }
      }
      if (best == a) continue;
      auto ca = r.centroids.row(static_cast<Eigen::Index>(a));
      auto cb = r.centroids.row(static_cast<Eigen::Index>(best));
      ca = (ca * na - x) / (na - 1.0);
      const double nb = static_cast<double>(sizes[best]);
      cb = (cb * nb + x) / (nb + 1.0);
      --sizes[a];
      ++sizes[best];
      r.assignment[i] = best;
      moved = true;
    }
  }
  recompute();

  r.sse = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    r.sse += (points.row(static_cast<Eigen::Index>(i)) -
              r.centroids.row(static_cast<Eigen::Index>(r.assignment[i]))).squaredNorm();
  return r;
}

}  // namespace topicgraph
