#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "topicgraph/corpus.hpp"

using namespace topicgraph;
using topicgraph::testing::TempDir;

namespace {

std::vector<std::vector<std::string>> sentence_words(const Document& d) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : d.sentences) out.push_back(s.words);
  return out;
}

Corpus corpus_of(std::initializer_list<const char*> lines) {
  Corpus c;
  for (const char* l : lines)
    if (auto d = make_document(c.documents.size(), l)) c.documents.push_back(std::move(*d));
  return c;
}

std::vector<LabeledText> separable_set(std::size_t n, std::uint64_t seed) {
  const std::vector<std::string> a = {"organic", "farm", "soil", "harvest", "compost", "seed", "crop", "field"};
  const std::vector<std::string> b = {"stock", "market", "share", "index", "bond", "yield", "fund", "trade"};
  Rng rng(seed);
  std::vector<LabeledText> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool rel = i % 2 == 0;
    LabeledText t;
    t.label = rel ? Relevance::relevant : Relevance::irrelevant;
    for (int w = 0; w < 6; ++w) t.tokens.push_back((rel ? a : b)[rng.index(8)]);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("two sentences are split and lowercased") {
    auto d = make_document(0, "Organic food is great. I buy it weekly.");
    REQUIRE(d);
    CHECK(sentence_words(*d) == std::vector<std::vector<std::string>>{{"organic", "food", "is", "great"},
                                                                       {"i", "buy", "it", "weekly"}});
    CHECK(d->sentences[1].raw == "I buy it weekly.");
  }

  TEST_CASE("blank text yields no document") {
    CHECK_FALSE(make_document(0, ""));
    CHECK_FALSE(make_document(0, "  \t "));
  }

  TEST_CASE("three lines with one blank give two documents") {
    TempDir dir;
    auto p = dir.write("c.txt", "First doc here.\n\nSecond doc! Another sentence?\n");
    std::vector<std::filesystem::path> paths{p};
    auto c = ingest(paths, InputFormat::lines);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].id == 0);
    CHECK(c.documents[1].id == 1);
    CHECK(c.documents[1].sentences.size() == 2);
    CHECK(c.sentence_count() == 3);
  }

  TEST_CASE("sentence splitting needs whitespace after the mark") {
    CHECK(split_sentences("Version 1.5 is out. Buy it!") == std::vector<std::string>{"Version 1.5 is out.", "Buy it!"});
    CHECK(split_sentences("What?! Really") == std::vector<std::string>{"What?!", "Really"});
  }

  TEST_CASE("tokenizer keeps intra-word hyphens and apostrophes only") {
    CHECK(tokenize("Farm-to-table, isn't it? -- 'quoted' e-") ==
          std::vector<std::string>{"farm-to-table", "isn't", "it", "quoted", "e"});
    CHECK(tokenize("Crème BRÛLÉE") == std::vector<std::string>{"crème", "brÛlÉe"});
  }

  TEST_CASE("tokenizing joined tokens reproduces them") {
    Rng rng(3);
    const std::string alphabet = "abcXYZ019 -'.,!?\t";
    for (int trial = 0; trial < 300; ++trial) {
      std::string text;
      for (std::size_t i = 0, n = rng.index(40); i < n; ++i) text += alphabet[rng.index(alphabet.size())];
      auto tokens = tokenize(text);
      std::string joined;
      for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
      CHECK(tokenize(joined) == tokens);
    }
  }

  TEST_CASE("unreadable file is fatal and names the path") {
    std::vector<std::filesystem::path> paths{"/nonexistent/dir/corpus.txt"};
    try {
      ingest(paths, InputFormat::lines);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("/nonexistent/dir/corpus.txt") != std::string::npos);
    }
  }

  TEST_CASE("malformed JSON records are skipped and counted") {
    TempDir dir;
    auto p = dir.write("c.jsonl",
                       "{\"text\": \"Good apples.\", \"id\": 7}\n"
                       "not json\n"
                       "{\"id\": 3}\n"
                       "{\"text\": \"Dup id.\", \"id\": 7}\n"
                       "{\"text\": \"Negative id.\", \"id\": -1}\n"
                       "\n"
                       "{\"text\": \"No id here.\"}\n");
    std::vector<std::filesystem::path> paths{p};
    auto c = ingest(paths, InputFormat::json_lines);
    CHECK(c.malformed_records == 4);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].id == 7);
    CHECK(c.documents[1].id == 0);
  }

  TEST_CASE("vocabulary keeps the most frequent words") {
    auto c = corpus_of({"a a a a a b b b c"});
    auto v = Vocabulary::build(c, 2, 1);
    CHECK(v.words() == std::vector<std::string>{"a", "b"});
    CHECK(v.count(0) == 5);
    CHECK(Vocabulary::build(c, 10, 2).words() == std::vector<std::string>{"a", "b"});
    CHECK(Vocabulary::build(c, 10, 1).size() == 3);
  }

  TEST_CASE("vocabulary ties break lexicographically") {
    auto c = corpus_of({"b a b a"});
    CHECK(Vocabulary::build(c, 1, 1).words() == std::vector<std::string>{"a"});
  }

  TEST_CASE("vocabulary argument errors") {
    auto c = corpus_of({"a b"});
    CHECK_THROWS_AS(Vocabulary::build(c, 0, 1), Error);
    CHECK_THROWS_AS(Vocabulary::build(c, 5, 0), Error);
    CHECK_THROWS_AS(Vocabulary::build(Corpus{}, 5, 1), Error);
  }

  TEST_CASE("vocabulary is bijective, dense and byte-identical across builds") {
    auto c = corpus_of({"the cat sat on the mat. the dog sat too.", "a cat and a dog"});
    auto v1 = Vocabulary::build(c, 100, 1);
    auto v2 = Vocabulary::build(c, 100, 1);
    std::ostringstream s1, s2;
    v1.save(s1);
    v2.save(s2);
    CHECK(s1.str() == s2.str());
    for (WordId i = 0; i < v1.size(); ++i) CHECK(v1.find(v1.word(i)) == i);
    for (WordId i = 1; i < v1.size(); ++i)
      CHECK((v1.count(i - 1) > v1.count(i) || (v1.count(i - 1) == v1.count(i) && v1.word(i - 1) < v1.word(i))));
    std::istringstream in(s1.str());
    CHECK(Vocabulary::load(in) == v1);
  }

  TEST_CASE("indexing drops out-of-vocabulary words and flags empty sentences") {
    auto c = corpus_of({"apple pear. kiwi."});
    auto v = Vocabulary::from_ranked({{"apple", 1}, {"pear", 1}}, 2);
    index_corpus(c, v);
    CHECK(c.documents[0].sentences[0].tokens == std::vector<WordId>{0, 1});
    CHECK_FALSE(c.documents[0].sentences[1].trainable());
    CHECK(trainable_sentences(c).size() == 1);
  }

  TEST_CASE("naive Bayes posterior matches the hand computation") {
    std::vector<LabeledText> ex = {{{"good", "organic"}, Relevance::relevant},
                                   {{"stock", "market"}, Relevance::irrelevant}};
    auto nb = NaiveBayesFilter::train(ex, 1.0);
    // Laplace estimates over the 4-word vocabulary, 2 tokens per class:
    // P(organic | relevant) = 2/6, P(organic | irrelevant) = 1/6, equal priors.
    // "farm" never occurred in training and does not change the posterior.
    const double rel = 0.5 * (2.0 / 6.0), irr = 0.5 * (1.0 / 6.0);
    std::vector<std::string> doc{"organic", "farm"};
    auto post = nb.posterior(doc);
    CHECK(post[0] == doctest::Approx(rel / (rel + irr)).epsilon(1e-12));
    CHECK(post[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(nb.classify(doc) == Relevance::relevant);
    CHECK(std::exp(*nb.log_likelihood("organic", Relevance::relevant)) == doctest::Approx(1.0 / 3.0));
    CHECK(nb.vocabulary_size() == 4);
  }

  TEST_CASE("unseen words do not move the posterior") {
    std::vector<LabeledText> ex = {{{"good", "organic", "organic"}, Relevance::relevant},
                                   {{"stock", "market"}, Relevance::irrelevant}};
    auto nb = NaiveBayesFilter::train(ex, 1.0);
    std::vector<std::string> base{"organic"}, with_unseen{"organic", "zebra", "quantum"};
    CHECK(nb.posterior(base)[0] == doctest::Approx(nb.posterior(with_unseen)[0]).epsilon(1e-15));
  }

  TEST_CASE("naive Bayes rejects single-class data and bad smoothing") {
    std::vector<LabeledText> one = {{{"a"}, Relevance::relevant}, {{"b"}, Relevance::relevant}};
    CHECK_THROWS_AS(NaiveBayesFilter::train(one, 1.0), Error);
    std::vector<LabeledText> two = {{{"a"}, Relevance::relevant}, {{"b"}, Relevance::irrelevant}};
    CHECK_THROWS_AS(NaiveBayesFilter::train(two, 0.0), Error);
  }

  TEST_CASE("naive Bayes probabilities are normalized") {
    auto ex = separable_set(40, 5);
    auto nb = NaiveBayesFilter::train(ex, 1.0);
    double prior = std::exp(nb.log_prior(Relevance::relevant)) + std::exp(nb.log_prior(Relevance::irrelevant));
    CHECK(prior == doctest::Approx(1.0).epsilon(1e-12));
    Rng rng(9);
    const std::vector<std::string> pool = {"organic", "stock", "farm", "bond", "unknown", "soil", "fund"};
    for (int t = 0; t < 100; ++t) {
      std::vector<std::string> doc;
      for (std::size_t i = 0, n = rng.index(12); i < n; ++i) doc.push_back(pool[rng.index(pool.size())]);
      auto p = nb.posterior(doc);
      CHECK(std::abs(p[0] + p[1] - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("ten-fold cross validation separates disjoint vocabularies") {
    auto ex = separable_set(100, 11);
    CHECK(cross_validate(ex, 10, 1.0, 1) >= 0.9);
  }

  TEST_CASE("filter keeps relevant documents that contain a keyword") {
    std::vector<LabeledText> ex = {{{"organic", "farm", "food"}, Relevance::relevant},
                                   {{"stock", "market", "bond"}, Relevance::irrelevant}};
    auto nb = NaiveBayesFilter::train(ex, 1.0);
    auto c = corpus_of({"organic farm food here", "farm soil only", "stock market organic crash crash stock",
                        "food from the organic farm"});
    std::vector<std::string> keywords{"food", "organic"};
    auto kept = nb_filter(c, nb, keywords);
    REQUIRE(kept.documents.size() == 2);
    CHECK(kept.documents[0].id == 0);  // relevant with keyword
    CHECK(kept.documents[1].id == 3);  // order preserved
    // no keyword: dropped even though relevant; keyword but irrelevant: dropped
    for (const auto& d : kept.documents)
      CHECK(std::any_of(c.documents.begin(), c.documents.end(), [&](const Document& o) { return o == d; }));
  }

  TEST_CASE("labeled training file loads") {
    TempDir dir;
    auto p = dir.write("nb.jsonl",
                       "{\"text\": \"Organic farms rock\", \"label\": \"relevant\"}\n"
                       "{\"text\": \"Stocks fell\", \"label\": \"irrelevant\"}\n");
    auto ex = load_labeled_texts(p);
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].tokens == std::vector<std::string>{"organic", "farms", "rock"});
    CHECK(ex[1].label == Relevance::irrelevant);
    auto bad = dir.write("bad.jsonl", "{\"text\": \"x\", \"label\": \"maybe\"}\n");
    CHECK_THROWS_AS(load_labeled_texts(bad), Error);
  }
}
