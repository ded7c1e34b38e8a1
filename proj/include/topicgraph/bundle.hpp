#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicgraph/cluster.hpp"
#include "topicgraph/labeling.hpp"
#include "topicgraph/sentiment.hpp"
#include "topicgraph/topics.hpp"

namespace topicgraph {

inline constexpr std::size_t kMaxSentenceChars = 300;
inline constexpr const char* kBundleFormat = "topicgraph-bundle/1";

struct WordEntry {
  std::string word;
  double distance = 0.0;
  bool operator==(const WordEntry&) const = default;
};

struct SentenceEntry {
  std::string text;
  double probability = 0.0;
  bool operator==(const SentenceEntry&) const = default;
};

struct BundleNode {
  std::size_t id = 0;
  std::string label;
  std::string auto_label;
  std::size_t hypernym_count = 0;  // frequency of auto_label as shared hypernym
  std::size_t occurrences = 0;
  double occurrence_fraction = 0.0;
  double sentiment = 0.0;
  std::size_t positive = 0, neutral = 0, negative = 0;
  std::vector<WordEntry> top_words;
  std::vector<SentenceEntry> top_sentences;
  bool operator==(const BundleNode&) const = default;
};

struct BundleEdge {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double correlation = 0.0;
  bool operator==(const BundleEdge&) const = default;
};

struct CorpusStats {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t assigned_sentences = 0;
  std::size_t tokens = 0;
  bool operator==(const CorpusStats&) const = default;
};

struct BundleMetadata {
  std::size_t topics = 0;
  std::size_t vocab_size = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  CorpusStats corpus;
  bool operator==(const BundleMetadata&) const = default;
};

struct GraphBundle {
  std::vector<BundleNode> nodes;
  std::vector<BundleEdge> edges;
  Dendrogram dendrogram;
  BundleMetadata metadata;
  bool operator==(const GraphBundle&) const = default;
};

struct BundleInputs {
  const TopicAssignment* assignment = nullptr;
  const CorrelationMatrix* correlation = nullptr;
  const std::vector<TopicSummary>* summaries = nullptr;
  const std::vector<SharedHypernymTally>* labels = nullptr;
  const TopicSentiment* sentiment = nullptr;
  const Dendrogram* dendrogram = nullptr;
  BundleMetadata metadata;
};

// Throws Error naming the first missing upstream stage.
GraphBundle build_bundle(const BundleInputs& inputs);

// First `max_chars` UTF-8 code points, with "…" appended when cut.
std::string truncate_text(const std::string& text, std::size_t max_chars = kMaxSentenceChars);

nlohmann::json to_json(const GraphBundle& b);
GraphBundle bundle_from_json(const nlohmann::json& j);

// Structural check of a bundle document; empty result means valid.
std::vector<std::string> validate_bundle(const nlohmann::json& j);

// {"labels": {"<topic id>": "<label>"}}
using LabelOverride = std::map<std::size_t, std::string>;
LabelOverride label_override_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LabelOverride& o);

// Replaces node labels; auto_label stays. Unknown ids or empty labels throw.
void apply_labels(GraphBundle& bundle, const LabelOverride& labels);

}  // namespace topicgraph
