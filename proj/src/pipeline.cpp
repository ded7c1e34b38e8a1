#include "topicgraph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "topicgraph/serialize.hpp"

namespace topicgraph {

namespace fs = std::filesystem;

bool RunResult::fully_cached() const {
  return !stages.empty() &&
         std::all_of(stages.begin(), stages.end(), [](const StageReport& r) { return r.cached; });
}

fs::path resolve_cache_dir(const Config& config, const std::optional<fs::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kCacheDirEnv); env && *env) return env;
  if (config.cache_dir) return *config.cache_dir;
  return config.base_dir / ".topicgraph-cache";
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Content digest of a file, or of every regular file directly inside a directory.
std::string digest(const fs::path& path) {
  Fnv1a h;
  if (fs::is_directory(path)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path))
      if (e.is_regular_file()) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) h.update(f.filename().string()).update("\n").update(read_file(f));
  } else {
    h.update(read_file(path));
  }
  return h.hex();
}

json optional_digest(const std::optional<fs::path>& p) { return p ? json(digest(*p)) : json(nullptr); }

std::string chain(const std::string& upstream, const char* stage, const json& params) {
  return Fnv1a().update(upstream).update("|").update(stage).update("|").update(params.dump()).hex();
}

Taxonomy load_taxonomy(const fs::path& p) {
  return fs::is_directory(p) ? Taxonomy::load_wordnet(p) : Taxonomy::load_json(p);
}

const fs::path& require(const std::optional<fs::path>& p, const char* key) {
  if (!p) throw Error(std::string("config key '") + key + "' is not set");
  return *p;
}

Corpus ingest_corpus(const Config& config) {
  if (config.corpus.empty()) throw Error("config key 'corpus' lists no input files");
  Corpus corpus = ingest(config.corpus, config.corpus_format);
  if (config.nb_training) {
    auto examples = load_labeled_texts(*config.nb_training);
    auto filter = NaiveBayesFilter::train(examples, config.nb_alpha);
    corpus = nb_filter(corpus, filter, config.nb_keywords);
  } else if (!config.nb_keywords.empty()) {
    Corpus kept;
    kept.malformed_records = corpus.malformed_records;
    for (const auto& d : corpus.documents) {
      bool hit = false;
      for (const auto& s : d.sentences)
        for (const auto& w : s.words)
          hit = hit || std::find(config.nb_keywords.begin(), config.nb_keywords.end(), w) !=
                           config.nb_keywords.end();
      if (hit) kept.documents.push_back(d);
    }
    corpus = std::move(kept);
  }
  if (corpus.documents.empty()) throw Error("no documents left after ingestion and filtering");
  return corpus;
}

EmbeddingTable base_embeddings(const Config& config, std::shared_ptr<const Vocabulary> vocab,
                               CoverageReport* report) {
  const auto seed = mix_seed(config.seed, 3);
  if (config.embeddings) return load_pretrained(*config.embeddings, std::move(vocab), seed, report);
  return random_table(std::move(vocab), config.embedding_dim, seed);
}

json vocab_to_json(const Vocabulary& v) {
  json entries = json::array();
  for (WordId i = 0; i < v.size(); ++i) entries.push_back({v.word(i), v.count(i)});
  return {{"max_size", v.max_size()}, {"entries", std::move(entries)}};
}

Vocabulary vocab_from_json(const json& j) {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  for (const auto& e : j.at("entries")) entries.emplace_back(e.at(0), e.at(1));
  return Vocabulary::from_ranked(std::move(entries), j.at("max_size"));
}

class Runner {
 public:
  Runner(fs::path dir, const RunOptions& options) : dir_(std::move(dir)), options_(options) {}

  template <typename Compute, typename Encode, typename Decode>
  auto stage(const char* name, const std::string& key, Compute compute, Encode encode, Decode decode) {
    const auto start = std::chrono::steady_clock::now();
    try {
      const fs::path file = dir_ / (std::string(name) + "-" + key + ".json");
      if (options_.use_cache && fs::exists(file)) {
        std::ifstream in(file);
        auto doc = json::parse(in, nullptr, false);
        if (!doc.is_discarded()) {
          try {
            auto value = decode(doc);
            finish(name, key, true, start);
            return value;
          } catch (const std::exception&) {
            // unreadable artifact from an older build: recompute below
          }
        }
      }
      auto value = compute();
      write_json_file(file, encode(value));
      finish(name, key, false, start);
      return value;
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  }

  void finish(const char* name, const std::string& key, bool cached,
              std::chrono::steady_clock::time_point start) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    reports.push_back({name, cached, key, s});
    if (options_.log) {
      *options_.log << "[" << std::setw(2) << reports.size() << "/" << kStages.size() << "] "
                    << std::left << std::setw(11) << name << std::right
                    << (cached ? "cached  " : "computed") << "  " << std::fixed << std::setprecision(2)
                    << s << " s" << std::defaultfloat << "\n";
    }
  }

  std::vector<StageReport> reports;

 private:
  fs::path dir_;
  const RunOptions& options_;
};

std::size_t token_count(const Corpus& c) {
  std::size_t n = 0;
  for (const auto& d : c.documents)
    for (const auto& s : d.sentences) n += s.words.size();
  return n;
}

}  // namespace

RunResult run_pipeline(const Config& config, const RunOptions& options) {
  config.validate();
  RunResult result;
  result.cache_dir = resolve_cache_dir(config, options.cache_dir);
  result.bundle_path = config.output;
  Runner run(result.cache_dir, options);

  auto keyed = [](const char* stage, auto&& params_fn, const std::string& upstream) {
    try {
      return chain(upstream, stage, params_fn());
    } catch (const std::exception& e) {
      throw StageError(stage, e.what());
    }
  };

  // ingest
  const auto ingest_key = keyed("ingest", [&] {
    json files = json::array();
    for (const auto& p : config.corpus) files.push_back(digest(p));
    return json{{"files", files},
                {"format", config.corpus_format == InputFormat::lines ? "lines" : "jsonl"},
                {"nb_training", optional_digest(config.nb_training)},
                {"nb_keywords", config.nb_keywords},
                {"nb_alpha", config.nb_alpha}};
  }, "");
  Corpus corpus = run.stage("ingest", ingest_key, [&] { return ingest_corpus(config); },
                            [](const Corpus& c) { return to_json(c); },
                            [](const json& j) { return corpus_from_json(j); });

  // vocab
  const auto vocab_key = keyed("vocab", [&] {
    return json{{"vocab_size", config.vocab_size}, {"min_count", config.min_count}};
  }, ingest_key);
  auto vocab = run.stage(
      "vocab", vocab_key,
      [&] { return std::make_shared<const Vocabulary>(Vocabulary::build(corpus, config.vocab_size, config.min_count)); },
      [](const std::shared_ptr<const Vocabulary>& v) { return vocab_to_json(*v); },
      [](const json& j) { return std::make_shared<const Vocabulary>(vocab_from_json(j)); });
  index_corpus(corpus, *vocab);
  const auto sentences = trainable_sentences(corpus);
  if (sentences.size() < 2)
    throw StageError("vocab", "fewer than two sentences contain an in-vocabulary word");

  // embeddings
  const auto emb_key = keyed("embeddings", [&] {
    return json{{"file", optional_digest(config.embeddings)},
                {"dim", config.embeddings ? 0 : config.embedding_dim},
                {"seed", config.seed},
                {"finetune",
                 {config.finetune_epochs, config.finetune_window, config.finetune_negatives, config.finetune_lr}}};
  }, vocab_key);
  const EmbeddingTable table = run.stage(
      "embeddings", emb_key,
      [&] {
        CoverageReport coverage;
        auto t = base_embeddings(config, vocab, &coverage);
        if (config.embeddings && options.log)
          *options.log << "      embedding coverage " << coverage.found << "/" << coverage.total << "\n";
        if (config.finetune_epochs > 0) t = finetune(t, sentences, config.skipgram()).table;
        return t;
      },
      [](const EmbeddingTable& t) { return matrix_to_json(t.matrix()); },
      [&](const json& j) { return EmbeddingTable(vocab, matrix_from_json(j)); });

  // init
  const auto init_key = keyed("init", [&] {
    return json{{"topics", config.topics}, {"init_vocab_limit", config.init_vocab_limit}, {"seed", config.seed}};
  }, emb_key);
  const auto train_cfg = config.train_config();
  ModelParams initial = run.stage(
      "init", init_key,
      [&] {
        std::vector<WordId> rows;
        if (config.init_vocab_limit > 0 && config.init_vocab_limit < vocab->size())
          for (WordId i = 0; i < config.init_vocab_limit; ++i) rows.push_back(i);
        return init_topics(table, config.topics, config.seed, rows);
      },
      [&](const ModelParams& p) { return checkpoint_to_json(p, train_cfg); },
      [](const json& j) { return checkpoint_from_json(j); });

  // train
  const auto train_key = keyed("train", [&] { return to_json(train_cfg); }, init_key);
  TrainResult trained = run.stage(
      "train", train_key, [&] { return train(initial, table, sentences, train_cfg); },
      [&](const TrainResult& r) {
        auto j = checkpoint_to_json(r.params, train_cfg, r.epoch_loss);
        if (train_cfg.train_embeddings) j["embeddings"] = matrix_to_json(r.embeddings);
        return j;
      },
      [&](const json& j) {
        TrainResult r;
        r.params = checkpoint_from_json(j, nullptr, &r.epoch_loss);
        r.embeddings = j.contains("embeddings") ? matrix_from_json(j["embeddings"]) : table.matrix();
        return r;
      });
  const EmbeddingTable final_table =
      train_cfg.train_embeddings ? EmbeddingTable(vocab, trained.embeddings) : table;

  // assign
  const auto assign_key = keyed("assign", [] { return json::object(); }, train_key);
  const TopicAssignment assignment = run.stage(
      "assign", assign_key, [&] { return assign(trained.params, final_table, sentences); },
      [](const TopicAssignment& a) { return json{{"probabilities", matrix_to_json(a.probabilities)}}; },
      [](const json& j) { return assign_from_probabilities(matrix_from_json(j.at("probabilities"))); });

  // correlate
  const auto corr_key = keyed("correlate", [] { return json::object(); }, assign_key);
  const CorrelationMatrix correlation = run.stage(
      "correlate", corr_key, [&] { return correlate(assignment); },
      [](const CorrelationMatrix& c) { return to_json(c); },
      [](const json& j) { return correlation_from_json(j); });

  // summarize
  const auto summary_key = keyed("summarize", [&] {
    return json{{"top_words", config.top_words}, {"top_sentences", config.top_sentences}};
  }, assign_key);
  const std::vector<TopicSummary> summaries = run.stage(
      "summarize", summary_key,
      [&] {
        std::vector<TopicSummary> out;
        for (std::size_t k = 0; k < assignment.topic_count(); ++k)
          out.push_back(summarize(trained.params, final_table, assignment, sentences, k,
                                  config.top_sentences, config.top_words));
        return out;
      },
      [](const std::vector<TopicSummary>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back(to_json(s));
        return a;
      },
      [](const json& j) {
        std::vector<TopicSummary> v;
        for (const auto& s : j) v.push_back(summary_from_json(s));
        return v;
      });

  // label
  const auto label_key = keyed("label", [&] {
    return json{{"taxonomy", digest(require(config.taxonomy, "taxonomy"))}};
  }, summary_key);
  const std::vector<SharedHypernymTally> labels = run.stage(
      "label", label_key,
      [&] {
        const auto tax = load_taxonomy(*config.taxonomy);
        std::vector<SharedHypernymTally> out;
        for (const auto& s : summaries) {
          std::vector<std::string> words;
          for (const auto& w : s.words) words.push_back(w.word);
          out.push_back(label_topic(tax, words));
        }
        return out;
      },
      [](const std::vector<SharedHypernymTally>& v) {
        json a = json::array();
        for (const auto& t : v) a.push_back(to_json(t));
        return a;
      },
      [](const json& j) {
        std::vector<SharedHypernymTally> v;
        for (const auto& t : j) v.push_back(tally_from_json(t));
        return v;
      });

  // sentiment
  const auto sentiment_key = keyed("sentiment", [&] {
    return json{{"lexicon", digest(require(config.lexicon, "lexicon"))},
                {"boosters", digest(require(config.boosters, "boosters"))},
                {"negations", digest(require(config.negations, "negations"))},
                {"pos_threshold", config.pos_threshold},
                {"neg_threshold", config.neg_threshold}};
  }, assign_key);
  const TopicSentiment sentiment = run.stage(
      "sentiment", sentiment_key,
      [&] {
        const auto lex = SentimentLexicon::load(*config.lexicon, *config.boosters, *config.negations);
        std::vector<double> scores;
        scores.reserve(sentences.size());
        for (const auto& s : sentences) scores.push_back(score_sentence(lex, s.raw));
        return topic_sentiment(assignment.topic, assignment.topic_count(), scores, config.pos_threshold,
                               config.neg_threshold);
      },
      [](const TopicSentiment& t) { return to_json(t); },
      [](const json& j) { return topic_sentiment_from_json(j); });

  // cluster
  const auto cluster_key = keyed("cluster", [&] {
    return json{{"linkage", std::string(to_string(config.linkage))}};
  }, corr_key);
  const Dendrogram dendrogram = run.stage(
      "cluster", cluster_key, [&] { return build_dendrogram(correlation.values, config.linkage); },
      [](const Dendrogram& d) { return to_json(d); },
      [](const json& j) { return dendrogram_from_json(j); });

  // export
  BundleMetadata meta;
  meta.topics = config.topics;
  meta.vocab_size = vocab->size();
  meta.seed = config.seed;
  meta.config_hash = config.hash();
  meta.corpus = {corpus.documents.size(), corpus.sentence_count(), sentences.size(), token_count(corpus)};
  const auto export_key = keyed("export", [&] {
    return json{{"upstream", {label_key, sentiment_key, cluster_key, corr_key}},
                {"labels", optional_digest(config.labels)},
                {"config_hash", meta.config_hash}};
  }, summary_key);

  const auto start = std::chrono::steady_clock::now();
  const fs::path artifact = result.cache_dir / ("export-" + export_key + ".json");
  try {
    std::optional<json> cached_doc;
    if (options.use_cache && fs::exists(artifact) && fs::exists(config.output)) {
      auto a = json::parse(read_file(artifact), nullptr, false);
      auto b = json::parse(read_file(config.output), nullptr, false);
      if (!a.is_discarded() && a == b && validate_bundle(a).empty()) cached_doc = std::move(a);
    }
    if (cached_doc) {
      result.bundle = bundle_from_json(*cached_doc);
      run.finish("export", export_key, true, start);
    } else {
      BundleInputs in{&assignment, &correlation, &summaries, &labels, &sentiment, &dendrogram, meta};
      result.bundle = build_bundle(in);
      if (config.labels) apply_labels(result.bundle, label_override_from_json(read_json_file(*config.labels)));
      const json doc = to_json(result.bundle);
      if (auto errors = validate_bundle(doc); !errors.empty())
        throw Error("produced an invalid bundle: " + errors.front());
      write_json_file(config.output, doc, 2);
      write_json_file(artifact, doc);
      run.finish("export", export_key, false, start);
    }
  } catch (const std::exception& e) {
    throw StageError("export", e.what());
  }

  result.stages = std::move(run.reports);
  return result;
}

AnhReport run_sweep(const Config& config) {
  const Corpus corpus = ingest_corpus(config);
  const auto tax = load_taxonomy(require(config.taxonomy, "taxonomy"));

  std::vector<GridPoint> grid;
  const auto ks = config.sweep_topics.empty() ? std::vector<std::size_t>{config.topics} : config.sweep_topics;
  const auto vs = config.sweep_vocab_sizes.empty() ? std::vector<std::size_t>{config.vocab_size}
                                                   : config.sweep_vocab_sizes;
  for (auto k : ks)
    for (auto v : vs) grid.push_back({k, v});
  const auto seeds = config.sweep_seeds.empty() ? std::vector<std::uint64_t>{config.seed} : config.sweep_seeds;

  EmbeddingSource source = [&](std::shared_ptr<const Vocabulary> vocab) {
    auto table = base_embeddings(config, vocab, nullptr);
    if (config.finetune_epochs == 0) return table;
    Corpus indexed = corpus;
    index_corpus(indexed, *vocab);
    return finetune(table, trainable_sentences(indexed), config.skipgram()).table;
  };

  SweepOptions options;
  options.train = config.train_config();
  options.min_count = config.min_count;
  options.top_words = config.top_words;
  options.mode = config.anh_mode;
  options.budget = config.sweep_budget;
  options.workers = config.sweep_workers;
  return sweep(corpus, source, tax, grid, seeds, options);
}

GraphBundle export_with_labels(const fs::path& bundle, const std::optional<fs::path>& labels,
                               const fs::path& out) {
  GraphBundle b = bundle_from_json(read_json_file(bundle));
  if (labels) apply_labels(b, label_override_from_json(read_json_file(*labels)));
  write_json_file(out, to_json(b), 2);
  return b;
}

}  // namespace topicgraph
