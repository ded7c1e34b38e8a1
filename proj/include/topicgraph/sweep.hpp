#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicgraph/abae.hpp"
#include "topicgraph/labeling.hpp"

namespace topicgraph {

// UMass coherence of one ranked word list over sentence-level document
// frequencies: sum_{i>j} log((D(w_i, w_j) + 1) / D(w_j)). Words absent from
// every sentence are skipped.
double umass_coherence(std::span<const std::string> top_words, std::span<const Sentence> sentences);

struct GridPoint {
  std::size_t topics = 0;
  std::size_t vocab_size = 0;
  bool operator==(const GridPoint&) const = default;
};

// Produces the embedding table for a freshly built vocabulary.
using EmbeddingSource = std::function<EmbeddingTable(std::shared_ptr<const Vocabulary>)>;

struct SweepOptions {
  TrainConfig train;
  std::size_t min_count = 1;
  std::size_t top_words = 10;
  AnhMode mode = AnhMode::winning_label;
  bool coherence = true;
  std::size_t budget = 0;   // max model trainings, 0 = unlimited
  std::size_t workers = 1;  // grid points trained concurrently
};

struct SweepPoint {
  GridPoint point;
  std::string status = "ok";  // "ok", "skipped: ...", or "failed: ..."
  double anh = 0.0;           // mean over seeds
  std::optional<double> coherence;
  std::vector<double> anh_per_seed;
  std::vector<std::string> labels;  // of the first seed's model

  bool ok() const { return status == "ok"; }
};

struct AnhReport {
  std::vector<SweepPoint> points;
  std::size_t best = 0;  // index into points, maximal ANH among successful points

  const SweepPoint& chosen() const { return points.at(best); }
  nlohmann::json to_json() const;
};

// Scores one trained model: labels the top words of every topic.
std::vector<SharedHypernymTally> label_model(const ModelParams& params, const EmbeddingTable& table,
                                             const Taxonomy& tax, std::size_t top_words = 10);

// Trains one model per (grid point, seed) and reports the ANH of each point.
// Failures are recorded per point; throws only when every point fails.
AnhReport sweep(const Corpus& corpus, const EmbeddingSource& embeddings, const Taxonomy& tax,
                std::span<const GridPoint> grid, std::span<const std::uint64_t> seeds,
                const SweepOptions& options);

}  // namespace topicgraph
