#include "topicgraph/sweep.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "topicgraph/topics.hpp"

namespace topicgraph {

double umass_coherence(std::span<const std::string> top_words, std::span<const Sentence> sentences) {
  std::unordered_map<std::string, std::size_t> slot;
  for (const auto& w : top_words) slot.emplace(w, slot.size());
  const std::size_t n = slot.size();
  std::vector<double> single(n, 0.0);
  std::vector<double> pair(n * n, 0.0);
  std::vector<std::size_t> present;
  for (const auto& s : sentences) {
    present.clear();
    std::unordered_set<std::size_t> seen;
    for (const auto& w : s.words)
      if (auto it = slot.find(w); it != slot.end() && seen.insert(it->second).second)
        present.push_back(it->second);
    for (auto i : present) {
      single[i] += 1.0;
      for (auto j : present) pair[i * n + j] += 1.0;
    }
  }
  double score = 0.0;
  for (std::size_t i = 1; i < top_words.size(); ++i) {
    const auto wi = slot.at(top_words[i]);
    for (std::size_t j = 0; j < i; ++j) {
      const auto wj = slot.at(top_words[j]);
      if (single[wi] == 0.0 || single[wj] == 0.0 || wi == wj) continue;
      score += std::log((pair[wi * n + wj] + 1.0) / single[wj]);
    }
  }
  return score;
}

nlohmann::json AnhReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::json row{{"topics", p.point.topics},
                       {"vocab_size", p.point.vocab_size},
                       {"status", p.status},
                       {"anh", p.ok() ? nlohmann::json(p.anh) : nlohmann::json(nullptr)},
                       {"cs", p.coherence ? nlohmann::json(*p.coherence) : nlohmann::json(nullptr)},
                       {"anh_per_seed", p.anh_per_seed},
                       {"labels", p.labels}};
    rows.push_back(std::move(row));
  }
  nlohmann::json out{{"points", rows}};
  if (!points.empty() && points[best].ok())
    out["best"] = {{"topics", points[best].point.topics}, {"vocab_size", points[best].point.vocab_size},
                   {"anh", points[best].anh}};
  return out;
}

std::vector<SharedHypernymTally> label_model(const ModelParams& params, const EmbeddingTable& table,
                                             const Taxonomy& tax, std::size_t top_words) {
  std::vector<SharedHypernymTally> out;
  for (std::size_t k = 0; k < params.topic_count(); ++k) {
    auto ranked = rank_words(params.topics.row(static_cast<Eigen::Index>(k)).transpose(), table);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < ranked.size() && i < top_words; ++i) words.push_back(ranked[i].word);
    out.push_back(label_topic(tax, words));
  }
  return out;
}

namespace {

void run_point(const Corpus& corpus, const EmbeddingSource& embeddings, const Taxonomy& tax,
               std::span<const std::uint64_t> seeds, const SweepOptions& options, SweepPoint& out) {
  try {
    auto vocab = std::make_shared<const Vocabulary>(
        Vocabulary::build(corpus, out.point.vocab_size, options.min_count));
    Corpus indexed = corpus;
    index_corpus(indexed, *vocab);
    const auto sentences = trainable_sentences(indexed);
    const auto table = embeddings(vocab);

    double coherence_sum = 0.0;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      TrainConfig cfg = options.train;
      cfg.seed = seeds[si];
      auto params = init_topics(table, out.point.topics, seeds[si]);
      auto trained = train(std::move(params), table, sentences, cfg);
      EmbeddingTable final_table(vocab, trained.embeddings);
      auto tallies = label_model(trained.params, final_table, tax, options.top_words);
      out.anh_per_seed.push_back(anh(tallies, options.mode));
      if (si == 0)
        for (const auto& t : tallies) out.labels.push_back(t.label);
      if (options.coherence) {
        double cs = 0.0;
        for (std::size_t k = 0; k < trained.params.topic_count(); ++k) {
          auto ranked = rank_words(trained.params.topics.row(static_cast<Eigen::Index>(k)).transpose(),
                                   final_table);
          std::vector<std::string> words;
          for (std::size_t i = 0; i < ranked.size() && i < options.top_words; ++i)
            words.push_back(ranked[i].word);
          cs += umass_coherence(words, sentences);
        }
        coherence_sum += cs;
      }
    }
    double sum = 0.0;
    for (double v : out.anh_per_seed) sum += v;
    out.anh = sum / static_cast<double>(out.anh_per_seed.size());
    if (options.coherence) out.coherence = coherence_sum / static_cast<double>(seeds.size());
    out.status = "ok";
  } catch (const std::exception& e) {
    out.status = std::string("failed: ") + e.what();
    out.anh_per_seed.clear();
    out.labels.clear();
  }
}

}  // namespace

AnhReport sweep(const Corpus& corpus, const EmbeddingSource& embeddings, const Taxonomy& tax,
                std::span<const GridPoint> grid, std::span<const std::uint64_t> seeds,
                const SweepOptions& options) {
  if (grid.empty()) throw Error("sweep needs a non-empty grid");
  if (seeds.empty()) throw Error("sweep needs at least one seed");

  AnhReport report;
  std::vector<std::size_t> runnable;
  std::size_t spent = 0;
  for (const auto& g : grid) {
    SweepPoint p;
    p.point = g;
    if (options.budget > 0 && spent + seeds.size() > options.budget) {
      p.status = "skipped: training budget exhausted";
    } else {
      spent += seeds.size();
      runnable.push_back(report.points.size());
    }
    report.points.push_back(std::move(p));
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, runnable.size()));
  if (workers == 1) {
    for (auto i : runnable) run_point(corpus, embeddings, tax, seeds, options, report.points[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < runnable.size(); j = next++)
          run_point(corpus, embeddings, tax, seeds, options, report.points[runnable[j]]);
      });
    }
    for (auto& t : pool) t.join();
  }

  bool any = false;
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& p = report.points[i];
    if (!p.ok()) continue;
    if (!any || p.anh > report.points[report.best].anh) report.best = i;
    any = true;
  }
  if (!any) {
    std::string diag = "every sweep grid point failed:";
    for (const auto& p : report.points)
      diag += "\n  K=" + std::to_string(p.point.topics) + " vocab=" +
              std::to_string(p.point.vocab_size) + ": " + p.status;
    throw Error(diag);
  }
  return report;
}

}  // namespace topicgraph
