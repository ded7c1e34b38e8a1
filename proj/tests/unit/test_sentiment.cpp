#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "oracles.hpp"
#include "topicgraph/sentiment.hpp"

using namespace topicgraph;
namespace tt = topicgraph::testing;

namespace {

SentimentLexicon small_lexicon() {
  return SentimentLexicon({{"good", 2.0}, {"bad", -2.5}, {"love", 3.2}},
                          {{"very", 0.293}, {"barely", -0.293}}, {"not", "never"});
}

const SentimentLexicon& bundled() {
  static const auto lex = SentimentLexicon::load(tt::data_dir() / "lexicon" / "lexicon.tsv",
                                                 tt::data_dir() / "lexicon" / "boosters.txt",
                                                 tt::data_dir() / "lexicon" / "negations.txt");
  return lex;
}

}  // namespace

TEST_SUITE("sentiment") {
  TEST_CASE("no lexicon hits scores zero") {
    CHECK(score_sentence(small_lexicon(), "the and of") == 0.0);
    CHECK(score_sentence(small_lexicon(), "") == 0.0);
    CHECK(score_sentence(small_lexicon(), "nothing here!!!") == 0.0);
  }

  TEST_CASE("a lone word normalizes by sqrt(v^2 + 15)") {
    const double expected = 2.0 / std::sqrt(19.0);
    CHECK(score_sentence(small_lexicon(), "good") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.4588).epsilon(1e-4));
    CHECK(score_sentence(small_lexicon(), "Good.") == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("negation flips the sign") {
    const auto& lex = small_lexicon();
    CHECK(score_sentence(lex, "not good") < 0.0);
    CHECK(score_sentence(lex, "good") > 0.0);
    CHECK(raw_sentiment(lex, "not good") == doctest::Approx(-0.74 * 2.0));
    CHECK(raw_sentiment(lex, "never really so good") == doctest::Approx(-0.74 * 2.0));
    // outside the three-token window
    CHECK(raw_sentiment(lex, "not one two three good") == doctest::Approx(2.0));
    CHECK(raw_sentiment(lex, "it isn't bad") == doctest::Approx(-0.74 * -2.5));
    for (const char* text : {"good", "bad", "love"}) {
      const double a = score_sentence(lex, text);
      const double b = score_sentence(lex, std::string("not ") + text);
      CHECK(a * b < 0.0);
    }
  }

  TEST_CASE("boosters push away from zero, dampeners toward it") {
    const auto& lex = small_lexicon();
    CHECK(raw_sentiment(lex, "very good") == doctest::Approx(2.293));
    CHECK(raw_sentiment(lex, "very bad") == doctest::Approx(-2.793));
    CHECK(raw_sentiment(lex, "barely good") == doctest::Approx(1.707));
    CHECK(raw_sentiment(lex, "very x y good") == doctest::Approx(2.0));
  }

  TEST_CASE("capitals scale and exclamations add") {
    const auto& lex = small_lexicon();
    CHECK(raw_sentiment(lex, "GOOD") == doctest::Approx(2.5));
    CHECK(raw_sentiment(lex, "good!") == doctest::Approx(2.292));
    CHECK(raw_sentiment(lex, "good!!!!!") == doctest::Approx(2.0 + 3 * 0.292));
    CHECK(raw_sentiment(lex, "bad!!") == doctest::Approx(-2.5 - 2 * 0.292));
  }

  TEST_CASE("compound is bounded and monotone in the sum") {
    double prev = -1.0;
    for (double s = -50.0; s <= 50.0; s += 0.25) {
      const double c = normalize_compound(s);
      CHECK(c > -1.0);
      CHECK(c < 1.0);
      CHECK(c > prev);
      prev = c;
    }
  }

  TEST_CASE("topic means and polarity") {
    std::vector<std::size_t> topic = {0, 0, 1, 1, 1};
    std::vector<double> scores = {0.5, -0.5, 0.3, 0.3, 0.3};
    auto ts = topic_sentiment(topic, 3, scores);
    CHECK(ts.mean[0] == 0.0);
    CHECK(ts.polarity[0] == Polarity::neutral);
    CHECK(ts.mean[1] == doctest::Approx(0.3));
    CHECK(ts.polarity[1] == Polarity::positive);
    CHECK(ts.positive[0] == 1);
    CHECK(ts.negative[0] == 1);
    CHECK(ts.positive[1] == 3);
    CHECK(ts.empty[2]);
    CHECK(ts.mean[2] == 0.0);
    CHECK_FALSE(ts.empty[0]);
  }

  TEST_CASE("topic means match a grouped average exactly") {
    std::vector<std::size_t> topic = {2, 0, 1, 1, 0, 2, 2, 0, 1};
    std::vector<double> scores = {0.9, -0.2, 0.05, -0.7, 0.4, 0.1, -0.3, 0.0, 0.6};
    auto ts = topic_sentiment(topic, 3, scores);
    auto oracle = tt::grouped_mean(topic, 3, scores);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(ts.mean[k] == oracle[k]);
      CHECK(ts.positive[k] + ts.neutral[k] + ts.negative[k] == 3);
      CHECK(ts.mean[k] >= -1.0);
      CHECK(ts.mean[k] <= 1.0);
    }
    // 0.05 is not above the threshold
    CHECK(ts.neutral[1] == 1);
  }

  TEST_CASE("topic sentiment ignores sentence order within a topic") {
    std::vector<std::size_t> topic = {0, 0, 0, 0, 1, 1};
    std::vector<double> a = {0.1, 0.7, -0.3, 0.25, 0.5, -0.5};
    std::vector<double> b = {0.25, -0.3, 0.7, 0.1, -0.5, 0.5};
    auto x = topic_sentiment(topic, 2, a), y = topic_sentiment(topic, 2, b);
    CHECK(x.mean[0] == doctest::Approx(y.mean[0]).epsilon(1e-15));
    CHECK(x.mean[1] == doctest::Approx(y.mean[1]).epsilon(1e-15));
    CHECK(x.positive == y.positive);
    CHECK(x.negative == y.negative);
  }

  TEST_CASE("invalid inputs") {
    std::vector<std::size_t> topic = {0};
    std::vector<double> score = {0.1};
    CHECK_THROWS_AS(topic_sentiment(topic, 1, score, 0.0, 0.0), Error);
    CHECK_THROWS_AS(topic_sentiment(topic, 0, score), Error);
    std::vector<double> two = {0.1, 0.2};
    CHECK_THROWS_AS(topic_sentiment(topic, 1, two), Error);
  }

  TEST_CASE("lexicon files") {
    CHECK(bundled().size() >= 200);
    CHECK(score_sentence(bundled(), "This is great and I love it!") > 0.05);
    CHECK(score_sentence(bundled(), "The service was terrible and bad.") < -0.05);

    tt::TempDir dir;
    auto lex = dir.write("lex.tsv", "good\t1.9\nfine\t0.8\ngood\t2.0\n");
    auto boost = dir.write("b.txt", "very\n");
    auto neg = dir.write("n.txt", "not\n");
    CHECK_THROWS_AS(SentimentLexicon::load(lex, boost, neg), Error);
    auto bad = dir.write("bad.tsv", "good\tabc\n");
    CHECK_THROWS_AS(SentimentLexicon::load(bad, boost, neg), Error);
    CHECK_THROWS_AS(SentimentLexicon::load(dir / "missing.tsv", boost, neg), Error);
  }
}
