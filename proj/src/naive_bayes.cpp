#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "topicgraph/corpus.hpp"

namespace topicgraph {

NaiveBayesFilter NaiveBayesFilter::train(std::span<const LabeledText> examples, double alpha) {
  if (!(alpha > 0.0)) throw Error("naive Bayes smoothing constant must be positive");
  std::array<std::size_t, 2> docs{};
  std::array<double, 2> totals{};
  std::unordered_map<std::string, std::array<double, 2>> counts;
  for (const auto& ex : examples) {
    auto c = static_cast<int>(ex.label);
    ++docs[c];
    for (const auto& w : ex.tokens) {
      counts[w][c] += 1.0;
      totals[c] += 1.0;
    }
  }
  if (docs[0] == 0 || docs[1] == 0)
    throw Error("naive Bayes training needs at least one example per class");

  NaiveBayesFilter nb;
  nb.alpha_ = alpha;
  const double n = static_cast<double>(docs[0] + docs[1]);
  const double v = static_cast<double>(counts.size());
  for (int c = 0; c < 2; ++c) nb.log_prior_[c] = std::log(static_cast<double>(docs[c]) / n);
  for (auto& [w, cnt] : counts) {
    std::array<double, 2> ll{};
    for (int c = 0; c < 2; ++c) ll[c] = std::log((cnt[c] + alpha) / (totals[c] + alpha * v));
    nb.log_likelihood_.emplace(w, ll);
  }
  return nb;
}

std::optional<double> NaiveBayesFilter::log_likelihood(std::string_view word, Relevance c) const {
  auto it = log_likelihood_.find(std::string(word));
  if (it == log_likelihood_.end()) return std::nullopt;
  return it->second[static_cast<int>(c)];
}

std::array<double, 2> NaiveBayesFilter::posterior(std::span<const std::string> tokens) const {
  std::array<double, 2> score = log_prior_;
  for (const auto& w : tokens) {
    auto it = log_likelihood_.find(w);
    if (it == log_likelihood_.end()) continue;
    score[0] += it->second[0];
    score[1] += it->second[1];
  }
  const double top = std::max(score[0], score[1]);
  const double z = std::exp(score[0] - top) + std::exp(score[1] - top);
  return {std::exp(score[0] - top) / z, std::exp(score[1] - top) / z};
}

Relevance NaiveBayesFilter::classify(std::span<const std::string> tokens) const {
  auto p = posterior(tokens);
  return p[0] >= p[1] ? Relevance::relevant : Relevance::irrelevant;
}

double cross_validate(std::span<const LabeledText> examples, std::size_t folds, double alpha,
                      std::uint64_t seed) {
  if (folds < 2 || folds > examples.size())
    throw Error("cross validation needs 2 <= folds <= number of examples");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order.begin(), order.end());

  std::size_t correct = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<LabeledText> train_set;
    std::vector<std::size_t> test_idx;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i % folds == f)
        test_idx.push_back(order[i]);
      else
        train_set.push_back(examples[order[i]]);
    }
    auto nb = NaiveBayesFilter::train(train_set, alpha);
    for (auto i : test_idx)
      if (nb.classify(examples[i].tokens) == examples[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

std::vector<LabeledText> load_labeled_texts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read naive Bayes training file: " + path.string());
  std::vector<LabeledText> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("text") ||
        !rec["text"].is_string() || !rec.contains("label") || !rec["label"].is_string())
      throw Error(path.string() + ":" + std::to_string(line_no) + ": malformed training record");
    auto label = rec["label"].get<std::string>();
    LabeledText ex;
    if (label == "relevant")
      ex.label = Relevance::relevant;
    else if (label == "irrelevant")
      ex.label = Relevance::irrelevant;
    else
      throw Error(path.string() + ":" + std::to_string(line_no) + ": unknown label '" + label + "'");
    ex.tokens = tokenize(rec["text"].get<std::string>());
    out.push_back(std::move(ex));
  }
  return out;
}

Corpus nb_filter(const Corpus& corpus, const NaiveBayesFilter& filter,
                 std::span<const std::string> keywords) {
  std::unordered_set<std::string> keys(keywords.begin(), keywords.end());
  Corpus out;
  out.malformed_records = corpus.malformed_records;
  for (const auto& doc : corpus.documents) {
    std::vector<std::string> bag;
    bool has_keyword = false;
    for (const auto& s : doc.sentences) {
      for (const auto& w : s.words) {
        has_keyword = has_keyword || keys.count(w) > 0;
        bag.push_back(w);
      }
    }
    if (has_keyword && filter.classify(bag) == Relevance::relevant) out.documents.push_back(doc);
  }
  return out;
}

}  // namespace topicgraph
