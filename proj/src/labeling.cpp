#include <tuple>

#include "topicgraph/common.hpp"
#include "topicgraph/labeling.hpp"

namespace topicgraph {

std::optional<SharedHypernym> shared_hypernym(const Taxonomy& tax, std::string_view w1,
                                              std::string_view w2) {
  const auto senses1 = tax.senses(w1);
  const auto senses2 = tax.senses(w2);
  if (senses1.empty() || senses2.empty()) return std::nullopt;

  // The last key component keeps ties symmetric under argument swap.
  const bool forward = w1 <= w2;
  using Key = std::tuple<std::size_t, std::size_t, std::string_view, Taxonomy::SynsetId, std::size_t>;
  std::optional<Key> best_key;
  std::optional<SharedHypernym> best;

  for (auto s1 : senses1) {
    const auto up1 = tax.ancestors(s1);
    const std::size_t depth1 = tax.depth(s1);
    for (auto s2 : senses2) {
      const auto up2 = tax.ancestors(s2);
      const std::size_t depth2 = tax.depth(s2);
      for (const auto& [synset, d1] : up1) {
        auto it = up2.find(synset);
        if (it == up2.end()) continue;
        const std::size_t d2 = it->second;
        // d < depth / 2, kept in integers
        if (2 * d1 >= depth1 || 2 * d2 >= depth2) continue;
        Key key{d1 + d2, std::max(d1, d2), tax.name(synset), synset, forward ? d1 : d2};
        if (!best_key || key < *best_key) {
          best_key = key;
          best = SharedHypernym{tax.name(synset), synset, d1, d2};
        }
      }
    }
  }
  return best;
}

SharedHypernymTally label_topic(const Taxonomy& tax, std::span<const std::string> top_words) {
  SharedHypernymTally tally;
  for (std::size_t i = 0; i < top_words.size(); ++i) {
    for (std::size_t j = i + 1; j < top_words.size(); ++j) {
      if (auto h = shared_hypernym(tax, top_words[i], top_words[j])) {
        ++tally.counts[h->name];
        ++tally.total;
      }
    }
  }
  for (const auto& [name, count] : tally.counts) {
    if (count > tally.label_count) {
      tally.label = name;
      tally.label_count = count;
    }
  }
  if (tally.counts.empty()) {
    tally.fallback = true;
    tally.label = top_words.empty() ? std::string() : top_words.front();
  }
  return tally;
}

double anh(std::span<const SharedHypernymTally> tallies, AnhMode mode) {
  if (tallies.empty()) throw Error("ANH needs at least one topic");
  double sum = 0.0;
  for (const auto& t : tallies)
    sum += static_cast<double>(mode == AnhMode::winning_label ? t.label_count : t.total);
  return sum / static_cast<double>(tallies.size());
}

}  // namespace topicgraph
