#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "topicgraph/common.hpp"

namespace topicgraph {

struct Sentence {
  std::size_t doc_id = 0;
  std::size_t index = 0;           // position within the document
  std::string raw;                 // surface text, casing and punctuation intact
  std::vector<std::string> words;  // lowercased tokens
  std::vector<WordId> tokens;      // in-vocabulary ids, filled by index_corpus

  // Sentences without in-vocabulary tokens never reach the model.
  bool trainable() const { return !tokens.empty(); }

  bool operator==(const Sentence&) const = default;
};

struct Document {
  std::size_t id = 0;
  std::string raw_text;
  std::vector<Sentence> sentences;

  bool operator==(const Document&) const = default;
};

enum class InputFormat { lines, json_lines };

struct Corpus {
  std::vector<Document> documents;
  std::size_t malformed_records = 0;

  std::size_t sentence_count() const;

  bool operator==(const Corpus&) const = default;
};

// Lowercases ASCII and splits on anything that is not alphanumeric. Hyphens
// and apostrophes survive only between two word characters; bytes >= 0x80
// count as word characters so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

// Splits after '.', '!' or '?' when followed by whitespace or end of text.
// Returned pieces are trimmed; empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

// Builds a document from raw text; nullopt for blank text.
std::optional<Document> make_document(std::size_t id, std::string_view text);

// Throws Error naming the path when a file cannot be read. Malformed JSON
// records are skipped and counted in Corpus::malformed_records.
Corpus ingest(std::span<const std::filesystem::path> paths, InputFormat format);

class Vocabulary {
 public:
  Vocabulary() = default;

  // Ranked by descending frequency, ties broken lexicographically.
  static Vocabulary build(const Corpus& corpus, std::size_t max_size,
                          std::size_t min_count);

  // Entries must already be in rank order; ids are assigned by position.
  static Vocabulary from_ranked(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                std::size_t max_size);

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return words_.at(id); }
  std::uint64_t count(WordId id) const { return counts_.at(id); }
  std::size_t size() const { return words_.size(); }
  std::size_t max_size() const { return max_size_; }
  const std::vector<std::string>& words() const { return words_; }

  // word<TAB>id<TAB>count per line.
  void save(std::ostream& out) const;
  static Vocabulary load(std::istream& in, std::size_t max_size = 0);

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
  std::size_t max_size_ = 0;
};

// Fills Sentence::tokens from Sentence::words.
void index_corpus(Corpus& corpus, const Vocabulary& vocab);

// Flattened copy of all sentences that carry at least one in-vocabulary token.
std::vector<Sentence> trainable_sentences(const Corpus& corpus);

enum class Relevance : std::uint8_t { relevant = 0, irrelevant = 1 };

struct LabeledText {
  std::vector<std::string> tokens;
  Relevance label = Relevance::relevant;
};

// Multinomial naive Bayes over bag-of-words with additive smoothing. Words
// never seen in training are ignored at prediction time: their smoothed
// likelihood would be the same for both classes.
class NaiveBayesFilter {
 public:
  static NaiveBayesFilter train(std::span<const LabeledText> examples, double alpha = 1.0);

  // Posterior probabilities indexed by Relevance.
  std::array<double, 2> posterior(std::span<const std::string> tokens) const;
  Relevance classify(std::span<const std::string> tokens) const;

  double log_prior(Relevance c) const { return log_prior_[static_cast<int>(c)]; }
  std::optional<double> log_likelihood(std::string_view word, Relevance c) const;
  std::size_t vocabulary_size() const { return log_likelihood_.size(); }
  double alpha() const { return alpha_; }

 private:
  std::array<double, 2> log_prior_{};
  std::unordered_map<std::string, std::array<double, 2>> log_likelihood_;
  double alpha_ = 1.0;
};

// Stratification-free k-fold accuracy; folds are a seeded shuffle.
double cross_validate(std::span<const LabeledText> examples, std::size_t folds, double alpha,
                      std::uint64_t seed);

// JSON-lines with "text" and "label" in {"relevant","irrelevant"}.
std::vector<LabeledText> load_labeled_texts(const std::filesystem::path& path);

// Keeps documents the filter classifies as relevant AND that contain at
// least one keyword. Order is preserved.
Corpus nb_filter(const Corpus& corpus, const NaiveBayesFilter& filter,
                 std::span<const std::string> keywords);

}  // namespace topicgraph
