#include "topicgraph/topics.hpp"

#include <algorithm>
#include <numeric>

namespace topicgraph {

TopicAssignment assign_from_probabilities(Eigen::MatrixXd probabilities) {
  TopicAssignment a;
  const auto n = static_cast<std::size_t>(probabilities.rows());
  const auto k = static_cast<std::size_t>(probabilities.cols());
  a.probabilities = std::move(probabilities);
  a.topic.resize(n);
  a.counts.assign(k, 0);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < k; ++t)
      if (a.probabilities(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) >
          a.probabilities(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(best)))
        best = t;
    a.topic[s] = best;
    ++a.counts[best];
  }
  a.fractions.resize(k);
  for (std::size_t t = 0; t < k; ++t)
    a.fractions[t] = n == 0 ? 0.0 : static_cast<double>(a.counts[t]) / static_cast<double>(n);
  return a;
}

TopicAssignment assign(const ModelParams& params, const EmbeddingTable& table,
                       std::span<const Sentence> sentences) {
  Eigen::MatrixXd probs(static_cast<Eigen::Index>(sentences.size()),
                        static_cast<Eigen::Index>(params.topic_count()));
  for (std::size_t s = 0; s < sentences.size(); ++s)
    probs.row(static_cast<Eigen::Index>(s)) = encode(params, table, sentences[s]).topic_probs.transpose();
  return assign_from_probabilities(std::move(probs));
}

CorrelationMatrix correlate(const Eigen::MatrixXd& probabilities) {
  const auto n = probabilities.rows();
  const auto k = probabilities.cols();
  if (n < 2) throw Error("correlation needs at least 2 sentences");

  const Eigen::RowVectorXd mean = probabilities.colwise().mean();
  const Eigen::MatrixXd centered = probabilities.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered;

  CorrelationMatrix c;
  c.values = Eigen::MatrixXd::Zero(k, k);
  c.zero_variance.assign(static_cast<std::size_t>(k), false);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double scale = 1.0 + probabilities.col(i).squaredNorm();
    c.zero_variance[static_cast<std::size_t>(i)] = cov(i, i) <= 1e-28 * scale;
  }
  for (Eigen::Index i = 0; i < k; ++i) {
    c.values(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < k; ++j) {
      double r = 0.0;
      if (!c.zero_variance[static_cast<std::size_t>(i)] && !c.zero_variance[static_cast<std::size_t>(j)])
        r = std::clamp(cov(i, j) / std::sqrt(cov(i, i) * cov(j, j)), -1.0, 1.0);
      c.values(i, j) = r;
      c.values(j, i) = r;
    }
  }
  return c;
}

std::vector<RankedWord> rank_words(const Eigen::Ref<const Eigen::VectorXd>& topic_row,
                                   const EmbeddingTable& table) {
  const auto& m = table.matrix();
  std::vector<std::pair<double, WordId>> scored(table.rows());
  for (std::size_t i = 0; i < scored.size(); ++i)
    scored[i] = {1.0 - cosine(topic_row, m.row(static_cast<Eigen::Index>(i)).transpose()),
                 static_cast<WordId>(i)};
  std::sort(scored.begin(), scored.end());
  std::vector<RankedWord> out;
  out.reserve(scored.size());
  for (auto& [d, id] : scored) out.push_back({table.vocabulary().word(id), d});
  return out;
}

TopicSummary summarize(const ModelParams& params, const EmbeddingTable& table,
                       const TopicAssignment& assignment, std::span<const Sentence> sentences,
                       std::size_t topic, std::size_t n_sentences, std::size_t n_words) {
  if (topic >= params.topic_count()) throw Error("topic id out of range: " + std::to_string(topic));
  if (sentences.size() != assignment.sentence_count())
    throw Error("assignment and sentence list have different lengths");

  TopicSummary out;
  out.topic = topic;
  out.words = rank_words(params.topics.row(static_cast<Eigen::Index>(topic)).transpose(), table);
  if (out.words.size() > n_words) out.words.resize(n_words);

  std::vector<std::size_t> members;
  for (std::size_t s = 0; s < assignment.topic.size(); ++s)
    if (assignment.topic[s] == topic) members.push_back(s);
  const auto col = static_cast<Eigen::Index>(topic);
  std::stable_sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
    return assignment.probabilities(static_cast<Eigen::Index>(a), col) >
           assignment.probabilities(static_cast<Eigen::Index>(b), col);
  });
  if (members.size() > n_sentences) members.resize(n_sentences);
  for (auto s : members)
    out.sentences.push_back(
        {s, sentences[s].raw, assignment.probabilities(static_cast<Eigen::Index>(s), col)});
  return out;
}

}  // namespace topicgraph
