#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicgraph {

// Rule constants of the lexicon scorer (VADER values).
struct SentimentRules {
  double negation_scalar = -0.74;
  std::size_t negation_window = 3;
  double booster_increment = 0.293;
  std::size_t booster_window = 2;
  double caps_factor = 1.25;
  double exclamation_increment = 0.292;
  std::size_t max_exclamations = 3;
  double alpha = 15.0;
};

class SentimentLexicon {
 public:
  // Lookups are on lowercased tokens. Duplicate or non-finite entries throw.
  SentimentLexicon(std::unordered_map<std::string, double> valences,
                   std::unordered_map<std::string, double> boosters,
                   std::unordered_set<std::string> negations);

  // `token<TAB>valence` lexicon; boosters are one word per line with an
  // optional tab-separated increment (default +booster_increment);
  // negations are one word per line.
  static SentimentLexicon load(const std::filesystem::path& lexicon,
                               const std::filesystem::path& boosters,
                               const std::filesystem::path& negations,
                               double default_booster = SentimentRules{}.booster_increment);

  std::optional<double> valence(std::string_view lower) const;
  std::optional<double> booster(std::string_view lower) const;
  bool is_negation(std::string_view lower) const;
  std::size_t size() const { return valences_.size(); }

 private:
  std::unordered_map<std::string, double> valences_;
  std::unordered_map<std::string, double> boosters_;
  std::unordered_set<std::string> negations_;
};

// s / sqrt(s^2 + alpha)
double normalize_compound(double sum, double alpha = SentimentRules{}.alpha);

// Sum of rule-adjusted valences of the raw sentence, normalized to (-1, 1).
double score_sentence(const SentimentLexicon& lex, std::string_view text,
                      const SentimentRules& rules = {});

// Unnormalized valence sum, exclamation emphasis included.
double raw_sentiment(const SentimentLexicon& lex, std::string_view text,
                     const SentimentRules& rules = {});

enum class Polarity { negative, neutral, positive };

struct TopicSentiment {
  std::vector<double> mean;  // 0 for topics without sentences
  std::vector<Polarity> polarity;  // of the mean
  std::vector<std::size_t> positive, neutral, negative;
  std::vector<bool> empty;
};

TopicSentiment topic_sentiment(std::span<const std::size_t> topic_of_sentence,
                               std::size_t topic_count, std::span<const double> scores,
                               double pos_threshold = 0.05, double neg_threshold = -0.05);

}  // namespace topicgraph
