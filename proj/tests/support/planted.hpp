#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "topicgraph/corpus.hpp"
#include "topicgraph/embeddings.hpp"
#include "topicgraph/labeling.hpp"

namespace topicgraph::testing {

// Synthetic corpus with known topics. Word frequencies come in fixed tiers:
//   filler words    most frequent, outside the taxonomy, spread near the origin
//   core words      5 per topic, next most frequent
//   rim words       5 per topic, less frequent
//   rare words      5 per topic, least frequent, outside the taxonomy,
//                   packed tightly around the topic center
// so the vocabulary caps small_cap / middle_cap / large_cap admit filler+core,
// filler+core+rim, and everything. Core and rim words of a topic share one
// taxonomy parent that is shallow enough to pass the half-depth filter;
// words of different topics share nothing that passes it.
struct PlantedOptions {
  std::size_t topics = 3;
  std::size_t sentences_per_topic = 100;
  std::size_t dim = 16;
  std::size_t fillers = 12;
  double center_norm = 3.0;
  double word_spread = 0.35;  // per coordinate, core and rim words
  double rare_spread = 0.05;
  double filler_spread = 0.6;
  std::uint64_t seed = 1;
};

struct PlantedCorpus {
  Corpus corpus;
  std::vector<std::size_t> sentence_topic;           // planted topic per sentence, corpus order
  std::vector<std::vector<std::string>> topic_words;  // core then rim, 10 per topic
  std::unordered_map<std::string, Eigen::VectorXd> vectors;
  nlohmann::json taxonomy_json;
  std::size_t small_cap = 0, middle_cap = 0, large_cap = 0;

  Taxonomy taxonomy() const { return Taxonomy::from_json(taxonomy_json); }

  // Rows for every vocabulary word; words without a planted vector get zeros.
  EmbeddingTable table_for(std::shared_ptr<const Vocabulary> vocab) const;
};

PlantedCorpus make_planted(const PlantedOptions& options = {});

// Fraction of items whose label equals the majority planted label of their cluster.
double purity(const std::vector<std::size_t>& cluster, const std::vector<std::size_t>& planted);

}  // namespace topicgraph::testing
