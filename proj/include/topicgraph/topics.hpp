#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "topicgraph/abae.hpp"

namespace topicgraph {

struct TopicAssignment {
  Eigen::MatrixXd probabilities;     // N x K, row s = topic distribution of sentence s
  std::vector<std::size_t> topic;    // argmax per sentence, lowest id on ties
  std::vector<std::size_t> counts;   // per topic
  std::vector<double> fractions;     // counts / N

  std::size_t topic_count() const { return static_cast<std::size_t>(probabilities.cols()); }
  std::size_t sentence_count() const { return static_cast<std::size_t>(probabilities.rows()); }
};

TopicAssignment assign(const ModelParams& params, const EmbeddingTable& table,
                       std::span<const Sentence> sentences);
TopicAssignment assign_from_probabilities(Eigen::MatrixXd probabilities);

struct CorrelationMatrix {
  Eigen::MatrixXd values;          // K x K
  std::vector<bool> zero_variance; // topics whose probability series is constant
};

// Pearson correlation between the per-sentence probability series of every
// topic pair. Constant series get 0 off-diagonal (and 1 on the diagonal).
CorrelationMatrix correlate(const Eigen::MatrixXd& probabilities);
inline CorrelationMatrix correlate(const TopicAssignment& a) { return correlate(a.probabilities); }

struct RankedWord {
  std::string word;
  double distance = 0.0;  // 1 - cosine to the topic row
  bool operator==(const RankedWord&) const = default;
};

struct RankedSentence {
  std::size_t sentence = 0;  // index into the assigned sentence list
  std::string text;
  double probability = 0.0;
  bool operator==(const RankedSentence&) const = default;
};

struct TopicSummary {
  std::size_t topic = 0;
  std::vector<RankedWord> words;          // ascending distance
  std::vector<RankedSentence> sentences;  // descending probability
  bool operator==(const TopicSummary&) const = default;
};

// All vocabulary words ordered by cosine distance to the topic row; ties by id.
std::vector<RankedWord> rank_words(const Eigen::Ref<const Eigen::VectorXd>& topic_row,
                                   const EmbeddingTable& table);

// Top `n_words` words and the `n_sentences` assigned sentences with the
// highest probability for the topic.
TopicSummary summarize(const ModelParams& params, const EmbeddingTable& table,
                       const TopicAssignment& assignment, std::span<const Sentence> sentences,
                       std::size_t topic, std::size_t n_sentences = 5, std::size_t n_words = 10);

}  // namespace topicgraph
