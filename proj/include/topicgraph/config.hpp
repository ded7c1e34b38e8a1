#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "topicgraph/abae.hpp"
#include "topicgraph/cluster.hpp"
#include "topicgraph/corpus.hpp"
#include "topicgraph/embeddings.hpp"
#include "topicgraph/labeling.hpp"

namespace topicgraph {

// One flat JSON document. Every key is optional and falls back to the
// default below; unknown keys are rejected. Relative paths are resolved
// against the directory of the config file.
struct Config {
  std::filesystem::path base_dir;  // not a key

  // input
  std::vector<std::filesystem::path> corpus;
  InputFormat corpus_format = InputFormat::lines;
  std::optional<std::filesystem::path> nb_training;  // enables the relevance filter
  std::vector<std::string> nb_keywords;
  double nb_alpha = 1.0;

  // vocabulary
  std::size_t vocab_size = 10000;
  std::size_t min_count = 5;

  // embeddings
  std::optional<std::filesystem::path> embeddings;  // text vectors; random init when unset
  std::size_t embedding_dim = 300;                   // used only without a vector file
  std::size_t finetune_epochs = 0;
  std::size_t finetune_window = 5;
  std::size_t finetune_negatives = 5;
  double finetune_lr = 0.025;

  // model
  std::size_t topics = 15;
  std::size_t init_vocab_limit = 0;  // k-means over the N most frequent words, 0 = all
  TrainConfig train;                 // train.seed mirrors `seed`
  std::uint64_t seed = 1;

  // analytics
  std::size_t top_words = 10;
  std::size_t top_sentences = 5;
  std::optional<std::filesystem::path> taxonomy;  // JSON file or WordNet dict directory
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> boosters;
  std::optional<std::filesystem::path> negations;
  double pos_threshold = 0.05;
  double neg_threshold = -0.05;
  Linkage linkage = Linkage::average;
  std::optional<std::filesystem::path> labels;  // label override applied at export

  // output
  std::filesystem::path output = "bundle.json";
  std::optional<std::filesystem::path> cache_dir;

  // sweep
  std::vector<std::size_t> sweep_topics;
  std::vector<std::size_t> sweep_vocab_sizes;
  std::vector<std::uint64_t> sweep_seeds;
  std::size_t sweep_budget = 0;
  std::size_t sweep_workers = 1;
  AnhMode anh_mode = AnhMode::winning_label;
  std::filesystem::path sweep_report = "anh_report.json";

  // Cross-field checks that do not belong to a single stage.
  void validate() const;

  // Hash over the fields that influence pipeline artifacts. Output location,
  // cache location and sweep settings are excluded.
  std::string hash() const;

  SkipGramConfig skipgram() const;
  TrainConfig train_config() const;
};

Config config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
Config load_config(const std::filesystem::path& path);

// Paths are written relative to base_dir where possible.
nlohmann::json to_json(const Config& c);

// Applies `key=value` style overrides on top of a parsed document; the value
// text is parsed as JSON and falls back to a plain string.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

// Names of every accepted config key, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace topicgraph
