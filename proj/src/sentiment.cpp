#include "topicgraph/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "topicgraph/common.hpp"

namespace topicgraph {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_shouting(std::string_view s) {
  bool alpha = false;
  for (unsigned char c : s) {
    if (!std::isalpha(c)) continue;
    alpha = true;
    if (!std::isupper(c)) return false;
  }
  return alpha && s.size() > 1;
}

// Whitespace tokens with surrounding punctuation removed; inner apostrophes
// and hyphens stay ("don't", "well-made").
std::vector<std::string> surface_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    std::size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    if (e > b) out.push_back(tok.substr(b, e - b));
  }
  return out;
}

double sign(double x) { return (x > 0) - (x < 0); }

std::vector<std::string> read_lines(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(std::string("cannot read ") + what + " file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

double parse_real(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || !std::isfinite(v))
    throw Error(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

SentimentLexicon::SentimentLexicon(std::unordered_map<std::string, double> valences,
                                   std::unordered_map<std::string, double> boosters,
                                   std::unordered_set<std::string> negations)
    : valences_(std::move(valences)), boosters_(std::move(boosters)), negations_(std::move(negations)) {
  for (const auto& [w, v] : valences_)
    if (!std::isfinite(v)) throw Error("non-finite valence for '" + w + "'");
  for (const auto& [w, v] : boosters_)
    if (!std::isfinite(v)) throw Error("non-finite booster increment for '" + w + "'");
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& lexicon,
                                        const std::filesystem::path& boosters,
                                        const std::filesystem::path& negations,
                                        double default_booster) {
  std::unordered_map<std::string, double> val, boost;
  std::unordered_set<std::string> neg;
  std::size_t n = 0;
  for (const auto& line : read_lines(lexicon, "lexicon")) {
    ++n;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(lexicon.string() + ": entry without a tab: " + line);
    auto word = lower(line.substr(0, tab));
    auto rest = line.substr(tab + 1);
    rest = rest.substr(0, rest.find('\t'));
    if (!val.emplace(word, parse_real(rest, lexicon, n)).second)
      throw Error(lexicon.string() + ": duplicate lexicon entry '" + word + "'");
  }
  n = 0;
  for (const auto& line : read_lines(boosters, "booster")) {
    ++n;
    auto tab = line.find('\t');
    auto word = lower(line.substr(0, tab));
    double inc = tab == std::string::npos ? default_booster : parse_real(line.substr(tab + 1), boosters, n);
    if (!boost.emplace(word, inc).second)
      throw Error(boosters.string() + ": duplicate booster '" + word + "'");
  }
  for (const auto& line : read_lines(negations, "negation")) neg.insert(lower(line));
  return SentimentLexicon(std::move(val), std::move(boost), std::move(neg));
}

std::optional<double> SentimentLexicon::valence(std::string_view w) const {
  auto it = valences_.find(std::string(w));
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> SentimentLexicon::booster(std::string_view w) const {
  auto it = boosters_.find(std::string(w));
  if (it == boosters_.end()) return std::nullopt;
  return it->second;
}

bool SentimentLexicon::is_negation(std::string_view w) const {
  return negations_.count(std::string(w)) > 0 || w.ends_with("n't");
}

double normalize_compound(double sum, double alpha) { return sum / std::sqrt(sum * sum + alpha); }

double raw_sentiment(const SentimentLexicon& lex, std::string_view text, const SentimentRules& rules) {
  const auto tokens = surface_tokens(text);
  std::vector<std::string> lowered;
  lowered.reserve(tokens.size());
  for (const auto& t : tokens) lowered.push_back(lower(t));

  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto v = lex.valence(lowered[i]);
    if (!v) continue;
    double val = *v;
    if (is_shouting(tokens[i])) val *= rules.caps_factor;
    for (std::size_t back = 1; back <= rules.booster_window && back <= i; ++back)
      if (auto inc = lex.booster(lowered[i - back])) val += sign(val) * *inc;
    for (std::size_t back = 1; back <= rules.negation_window && back <= i; ++back) {
      if (lex.is_negation(lowered[i - back])) {
        val *= rules.negation_scalar;
        break;
      }
    }
    sum += val;
  }

  std::size_t marks = 0;
  auto end = text.find_last_not_of(" \t\r\n");
  while (end != std::string_view::npos && text[end] == '!') {
    ++marks;
    if (end == 0) break;
    --end;
  }
  marks = std::min(marks, rules.max_exclamations);
  sum += sign(sum) * rules.exclamation_increment * static_cast<double>(marks);
  return sum;
}

double score_sentence(const SentimentLexicon& lex, std::string_view text, const SentimentRules& rules) {
  return normalize_compound(raw_sentiment(lex, text, rules), rules.alpha);
}

TopicSentiment topic_sentiment(std::span<const std::size_t> topic_of_sentence,
                               std::size_t topic_count, std::span<const double> scores,
                               double pos_threshold, double neg_threshold) {
  if (!(neg_threshold < pos_threshold)) throw Error("sentiment thresholds need neg < pos");
  if (topic_of_sentence.size() != scores.size())
    throw Error("one sentiment score per assigned sentence is required");
  TopicSentiment out;
  out.mean.assign(topic_count, 0.0);
  out.positive.assign(topic_count, 0);
  out.neutral.assign(topic_count, 0);
  out.negative.assign(topic_count, 0);
  out.empty.assign(topic_count, true);
  out.polarity.assign(topic_count, Polarity::neutral);
  std::vector<std::size_t> n(topic_count, 0);
  for (std::size_t s = 0; s < scores.size(); ++s) {
    const auto t = topic_of_sentence[s];
    if (t >= topic_count) throw Error("sentence assigned to unknown topic");
    out.mean[t] += scores[s];
    ++n[t];
    if (scores[s] > pos_threshold)
      ++out.positive[t];
    else if (scores[s] < neg_threshold)
      ++out.negative[t];
    else
      ++out.neutral[t];
  }
  for (std::size_t t = 0; t < topic_count; ++t) {
    if (n[t] == 0) continue;
    out.empty[t] = false;
    out.mean[t] /= static_cast<double>(n[t]);
    if (out.mean[t] > pos_threshold)
      out.polarity[t] = Polarity::positive;
    else if (out.mean[t] < neg_threshold)
      out.polarity[t] = Polarity::negative;
  }
  return out;
}

}  // namespace topicgraph
