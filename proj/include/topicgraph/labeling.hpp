#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace topicgraph {

// Noun hypernym DAG. Synsets without parents are roots; depth is the
// shortest edge distance to a root.
class Taxonomy {
 public:
  using SynsetId = std::uint32_t;

  // {"<synset>": {"words": [...], "hypernyms": ["<synset>", ...]}, ...}
  static Taxonomy from_json(const nlohmann::json& doc);
  static Taxonomy load_json(const std::filesystem::path& path);

  // WordNet dict directory: data.noun (required) and noun.exc (optional).
  // Both `@` and `@i` pointers count as hypernym edges.
  static Taxonomy load_wordnet(const std::filesystem::path& dir);

  std::size_t size() const { return names_.size(); }
  const std::string& name(SynsetId s) const { return names_.at(s); }
  const std::vector<SynsetId>& hypernyms(SynsetId s) const { return parents_.at(s); }
  std::size_t depth(SynsetId s) const { return depth_.at(s); }
  bool is_root(SynsetId s) const { return parents_.at(s).empty(); }
  std::optional<SynsetId> find_synset(std::string_view name) const;

  // Senses of a word after lowercasing and mapping spaces to underscores.
  // Unknown words go through noun exceptions and suffix detachment.
  std::vector<SynsetId> senses(std::string_view word) const;
  bool contains(std::string_view word) const { return !senses(word).empty(); }

  // Every ancestor of `s` (including `s` at distance 0) with its shortest
  // upward edge distance.
  std::unordered_map<SynsetId, std::size_t> ancestors(SynsetId s) const;

 private:
  class Builder;

  void finalize();
  std::vector<SynsetId> lookup(const std::string& lemma) const;

  std::vector<std::string> names_;
  std::vector<std::vector<SynsetId>> parents_;
  std::vector<std::size_t> depth_;
  std::unordered_map<std::string, std::vector<SynsetId>> lemma_index_;
  std::unordered_map<std::string, SynsetId> name_index_;
  std::unordered_map<std::string, std::vector<std::string>> exceptions_;
};

struct SharedHypernym {
  std::string name;
  Taxonomy::SynsetId synset = 0;
  std::size_t d1 = 0;  // edges from the first word's sense
  std::size_t d2 = 0;
};

// Lowest shared ancestor over all sense pairs, restricted to ancestors that
// lie strictly closer than half of each sense's depth. Minimizes d1 + d2,
// then max(d1, d2), then the hypernym name.
std::optional<SharedHypernym> shared_hypernym(const Taxonomy& tax, std::string_view w1,
                                              std::string_view w2);

struct SharedHypernymTally {
  std::map<std::string, std::size_t> counts;  // hypernym name -> pair count
  std::string label;
  std::size_t label_count = 0;  // 0 when the fallback word is used
  std::size_t total = 0;        // word pairs that produced a hypernym
  bool fallback = false;

  bool operator==(const SharedHypernymTally&) const = default;
};

// Compares all unordered word pairs; the most frequent shared hypernym wins,
// ties going to the lexicographically smallest name. Without any shared
// hypernym the first (most representative) word is the label.
SharedHypernymTally label_topic(const Taxonomy& tax, std::span<const std::string> top_words);

enum class AnhMode {
  winning_label,  // sum of each topic's chosen-label count
  all_hypernyms,  // sum of every tally entry
};

// Average number of shared hypernyms over topics.
double anh(std::span<const SharedHypernymTally> tallies, AnhMode mode = AnhMode::winning_label);

}  // namespace topicgraph
