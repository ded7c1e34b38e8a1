// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "planted.hpp"
#include "topicgraph/abae.hpp"
#include "topicgraph/bundle.hpp"
#include "topicgraph/cluster.hpp"
#include "topicgraph/labeling.hpp"
#include "topicgraph/pipeline.hpp"
#include "topicgraph/sentiment.hpp"
#include "topicgraph/serialize.hpp"
#include "topicgraph/sweep.hpp"
#include "topicgraph/topics.hpp"

using namespace topicgraph;
namespace tt = topicgraph::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    if (ok) detail = what;
    ok = false;
  }
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

ModelParams random_params(Rng& rng, Eigen::Index k, Eigen::Index e) {
  ModelParams p;
  p.topics.resize(k, e);
  p.projection.resize(k, e);
  p.bias.resize(k);
  p.attention.resize(e, e);
  for (auto* m : {&p.topics, &p.projection, &p.attention})
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = rng.uniform(-1, 1);
  for (Eigen::Index i = 0; i < k; ++i) p.bias(i) = rng.uniform(-0.5, 0.5);
  return p;
}

Outcome gradients() {
  Outcome o;
  Timer t;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    auto p = random_params(rng, 3, 4);
    Eigen::MatrixXd emb(8, 4);
    for (Eigen::Index i = 0; i < emb.size(); ++i) emb.data()[i] = rng.uniform(-1, 1);
    std::vector<std::vector<WordId>> sents{{0, 1, 2}, {3, 4}}, negs{{5, 6}, {7}, {1, 6}, {2, 3, 4}};
    std::vector<std::span<const WordId>> batch(sents.begin(), sents.end()), neg(negs.begin(), negs.end());
    auto g = Gradients::zeros_like(p);
    objective(p, emb, batch, neg, 0.3, 1.0, 0.5, &g);
    auto f = [&] { return objective(p, emb, batch, neg, 0.3, 1.0, 0.5); };
    const double h = 1e-5;
    worst = std::max({worst, tt::max_relative_error(g.topics, tt::central_difference(f, p.topics, h)),
                      tt::max_relative_error(g.projection, tt::central_difference(f, p.projection, h)),
                      tt::max_relative_error(g.bias, tt::central_difference(f, p.bias, h)),
                      tt::max_relative_error(g.attention, tt::central_difference(f, p.attention, h))});
  }
  o.require(worst < 1e-4, "max relative error " + fmt(worst));
  o.require(t.seconds() < 5.0, "took " + fmt(t.seconds()) + " s");
  if (o.ok) o.detail = "max relative error " + fmt(worst);
  return o;
}

Outcome planted_recovery() {
  Outcome o;
  Timer t;
  auto planted = tt::make_planted();
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::build(planted.corpus, planted.middle_cap, 1));
  Corpus c = planted.corpus;
  index_corpus(c, *vocab);
  const auto sents = trainable_sentences(c);
  auto table = planted.table_for(vocab);
  TrainConfig cfg;
  auto r = train(init_topics(table, 3, 1), table, sents, cfg);
  const double purity = tt::purity(assign(r.params, table, sents).topic, planted.sentence_topic);
  o.require(purity >= 0.8, "purity " + fmt(purity));
  o.require(t.seconds() < 120.0, "took " + fmt(t.seconds()) + " s");
  if (o.ok) o.detail = "purity " + fmt(purity);
  return o;
}

Outcome pearson() {
  Outcome o;
  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd p(50, 5);
    std::vector<std::vector<double>> rows(50, std::vector<double>(5));
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 5; ++j) p(i, j) = rng.uniform() + 1e-3;
      p.row(i) /= p.row(i).sum();
      for (int j = 0; j < 5; ++j) rows[i][j] = p(i, j);
    }
    auto c = correlate(p);
    for (std::size_t i = 0; i < 5; ++i) {
      o.require(c.values(i, i) == 1.0, "self-correlation is not exactly 1");
      for (std::size_t j = 0; j < 5; ++j) {
        worst = std::max(worst, std::abs(c.values(i, j) - tt::pearson_oracle(rows, i, j)));
        o.require(c.values(i, j) >= -1.0 && c.values(i, j) <= 1.0, "entry outside [-1, 1]");
      }
    }
  }
  o.require(worst <= 1e-12, "max deviation " + fmt(worst));
  if (o.ok) o.detail = "max deviation " + fmt(worst);
  return o;
}

Outcome food_tree() {
  Outcome o;
  auto tax = Taxonomy::load_json(fs::path(TOPICGRAPH_DATA_DIR) / "food_taxonomy.json");
  auto a = shared_hypernym(tax, "yoghurt", "butter");
  o.require(a && a->name == "dairy_product", "yoghurt/butter is not dairy_product");
  auto b = shared_hypernym(tax, "yoghurt", "bread");
  o.require(b && b->name == "food", "yoghurt/bread is not food");
  const std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail",
                                          "food", "selling", "dairy_product", "commerce", "matter"};
  for (const auto& x : words)
    for (const auto& y : words)
      if (auto h = shared_hypernym(tax, x, y)) o.require(!tax.is_root(h->synset), "root returned for " + x + "/" + y);
  return o;
}

Outcome anh_optimum() {
  Outcome o;
  Timer t;
  int k_wins = 0, middle_wins = 0;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    tt::PlantedOptions po;
    po.seed = seed;
    auto p = tt::make_planted(po);
    EmbeddingSource src = [&](std::shared_ptr<const Vocabulary> v) { return p.table_for(v); };
    std::vector<GridPoint> grid = {{2, p.middle_cap}, {3, p.middle_cap}, {6, p.middle_cap},
                                   {3, p.small_cap},  {3, p.large_cap}};
    std::vector<std::uint64_t> seeds = {seed};
    SweepOptions opts;
    opts.train.lr = 0.001;
    opts.train.epochs = 15;
    opts.coherence = false;
    auto r = sweep(p.corpus, src, p.taxonomy(), grid, seeds, opts);
    const auto& pts = r.points;
    const bool k3 = pts[1].anh > pts[0].anh && pts[1].anh > pts[2].anh;
    const bool middle = pts[1].anh > pts[3].anh && pts[1].anh > pts[4].anh;
    k_wins += k3;
    middle_wins += middle;
    per_seed += " " + fmt(pts[0].anh) + "/" + fmt(pts[1].anh) + "/" + fmt(pts[2].anh);
  }
  o.require(k_wins >= 4, "K=3 best for only " + std::to_string(k_wins) + " of 5 seeds;" + per_seed);
  o.require(middle_wins >= 4, "middle cap best for only " + std::to_string(middle_wins) + " of 5 seeds");
  if (o.ok)
    o.detail = "K=3 best " + std::to_string(k_wins) + "/5, middle cap best " + std::to_string(middle_wins) +
               "/5, " + fmt(t.seconds()) + " s";
  return o;
}

Outcome anh_arithmetic() {
  Outcome o;
  std::vector<SharedHypernymTally> tallies(4);
  const std::array<std::size_t, 4> counts = {102, 91, 74, 0};
  for (std::size_t i = 0; i < 4; ++i) {
    tallies[i].label_count = counts[i];
    tallies[i].total = counts[i];
    tallies[i].fallback = counts[i] == 0;
  }
  const double v = anh(tallies);
  o.require(v == 66.75, "got " + fmt(v, 10));
  return o;
}

Outcome sentiment() {
  Outcome o;
  double prev = -1.0;
  for (double s = -100.0; s <= 100.0; s += 0.125) {
    const double c = normalize_compound(s);
    o.require(c > -1.0 && c < 1.0, "compound outside (-1, 1) at " + fmt(s));
    o.require(c > prev, "compound not increasing at " + fmt(s));
    prev = c;
  }
  SentimentLexicon lex({{"nice", 2.0}}, {}, {});
  const double single = score_sentence(lex, "nice");
  o.require(std::abs(single - 0.4588) <= 1e-4, "valence-2 singleton scored " + fmt(single, 6));

  Rng rng(6);
  std::vector<std::size_t> topic(90);
  std::vector<double> scores(90);
  for (std::size_t i = 0; i < 90; ++i) {
    topic[i] = rng.index(4);
    scores[i] = rng.uniform(-1, 1);
  }
  auto ts = topic_sentiment(topic, 5, scores);
  auto oracle = tt::grouped_mean(topic, 5, scores);
  for (std::size_t k = 0; k < 5; ++k) o.require(ts.mean[k] == oracle[k], "topic mean differs from grouped mean");
  return o;
}

Outcome dendrogram() {
  Outcome o;
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j) c(i, j) = c(j, i) = rng.uniform(-1, 1);
    auto d = build_dendrogram(c);
    auto oracle = tt::naive_average_linkage(c);
    o.require(d.merges.size() == oracle.size(), "merge count differs");
    for (std::size_t i = 0; i < oracle.size() && i < d.merges.size(); ++i) {
      o.require(d.merges[i].a == oracle[i].a && d.merges[i].b == oracle[i].b, "merge order differs");
      o.require(std::abs(d.merges[i].distance - oracle[i].distance) <= 1e-12, "merge distance differs");
    }
    std::size_t prev = 0;
    for (double t = -1.0; t <= 1.0 + 1e-9; t += 0.02) {
      auto g = cut(d, t);
      const auto n = std::set<std::size_t>(g.begin(), g.end()).size();
      o.require(n >= prev, "group count fell as the threshold rose");
      prev = n;
    }
  }
  return o;
}

int run_command(const std::string& cmd, std::string& output) {
  output.clear();
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
  const int status = ::pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome end_to_end() {
  Outcome o;
  const fs::path work = fs::temp_directory_path() / ("topicgraph-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path bundle = work / "bundle.json";
  const std::string cmd = std::string("\"") + TOPICGRAPH_CLI_PATH + "\" run -c \"" + TOPICGRAPH_DATA_DIR +
                          "/toy/config.json\" --output \"" + bundle.string() + "\" --cache-dir \"" +
                          (work / "cache").string() + "\"";
  std::string out;
  Timer t;
  const int code = run_command(cmd, out);
  const double secs = t.seconds();
  o.require(code == 0, "run exited with " + std::to_string(code) + ": " + out);
  o.require(secs < 60.0, "run took " + fmt(secs) + " s");
  if (o.ok) {
    const auto doc = read_json_file(bundle);
    const auto errors = validate_bundle(doc);
    o.require(errors.empty(), errors.empty() ? "" : "invalid bundle: " + errors.front());
    double sum = 0.0;
    for (const auto& n : doc.at("nodes")) sum += n.at("occurrence_fraction").get<double>();
    o.require(std::abs(sum - 1.0) <= 1e-9, "occurrence fractions sum to " + fmt(sum, 17));

    std::string probe;
    if (run_command("python3 -c \"import jsonschema\"", probe) == 0) {
      std::string schema_out;
      const int rc = run_command(std::string("python3 \"") + TOPICGRAPH_VALIDATOR_PATH + "\" \"" +
                                     TOPICGRAPH_SCHEMA_PATH + "\" \"" + bundle.string() + "\"",
                                 schema_out);
      o.require(rc == 0, "schema validation failed: " + schema_out);
    }

    std::string again;
    const int code2 = run_command(cmd, again);
    o.require(code2 == 0 && again.find("all stages cached") != std::string::npos,
              "repeated run was not fully cached: " + again);
  }
  fs::remove_all(work);
  if (o.ok) o.detail = "first run " + fmt(secs) + " s, rerun fully cached, no secondary component built";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient suite", gradients},
      {"planted-topic recovery", planted_recovery},
      {"pearson oracle", pearson},
      {"hypernym tree fixture", food_tree},
      {"ANH interior optimum", anh_optimum},
      {"ANH arithmetic", anh_arithmetic},
      {"sentiment scoring", sentiment},
      {"dendrogram", dendrogram},
      {"end-to-end run", end_to_end},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Timer t;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << name << "  (" << fmt(t.seconds()) << " s)";
    if (!o.detail.empty()) std::cout << "  " << o.detail;
    std::cout << std::endl;
    failures += !o.ok;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
