#include <doctest.h>

#include <algorithm>
#include <filesystem>

#include "helpers.hpp"
#include "topicgraph/labeling.hpp"

using namespace topicgraph;
namespace tt = topicgraph::testing;

namespace {

const Taxonomy& food_tree() {
  static const Taxonomy tax = Taxonomy::load_json(tt::data_dir() / "food_taxonomy.json");
  return tax;
}

// root -> top -> mid -> parent -> {a, b, c}; seven more words are unknown.
Taxonomy three_siblings() {
  return Taxonomy::from_json(nlohmann::json::parse(R"({
    "root": {"hypernyms": []},
    "top": {"hypernyms": ["root"]},
    "mid": {"hypernyms": ["top"]},
    "parent": {"hypernyms": ["mid"]},
    "a": {"hypernyms": ["parent"]},
    "b": {"hypernyms": ["parent"]},
    "c": {"words": ["c", "sea"], "hypernyms": ["parent"]}
  })"));
}

}  // namespace

TEST_SUITE("labeling") {
  TEST_CASE("yoghurt and butter meet at dairy_product") {
    auto h = shared_hypernym(food_tree(), "yoghurt", "butter");
    REQUIRE(h);
    CHECK(h->name == "dairy_product");
    CHECK(h->d1 == 1);
    CHECK(h->d2 == 1);
  }

  TEST_CASE("yoghurt and bread meet at food") {
    // yoghurt depth 7, bread depth 6: food at 3 < 3.5 and 2 < 3
    auto h = shared_hypernym(food_tree(), "yoghurt", "bread");
    REQUIRE(h);
    CHECK(h->name == "food");
    CHECK(h->d1 == 3);
    CHECK(h->d2 == 2);
  }

  TEST_CASE("wholesale and retail meet at selling despite the long path") {
    CHECK(food_tree().depth(*food_tree().find_synset("wholesale")) == 9);
    auto h = shared_hypernym(food_tree(), "wholesale", "retail");
    REQUIRE(h);
    CHECK(h->name == "selling");
    CHECK(h->d1 == 1);
    CHECK(h->d2 == 1);
  }

  TEST_CASE("bread and cake meet at baked_goods") {
    auto h = shared_hypernym(food_tree(), "bread", "cake");
    REQUIRE(h);
    CHECK(h->name == "baked_goods");
  }

  TEST_CASE("the root is never a shared hypernym") {
    // only entity is common, which fails the half-depth bound
    CHECK_FALSE(shared_hypernym(food_tree(), "yoghurt", "wholesale"));
    CHECK_FALSE(shared_hypernym(food_tree(), "cake", "retail"));
    std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail",
                                      "food",    "selling", "commerce", "dairy_product"};
    for (const auto& x : words)
      for (const auto& y : words)
        if (auto h = shared_hypernym(food_tree(), x, y)) {
          CHECK(h->name != "entity");
          CHECK_FALSE(food_tree().is_root(h->synset));
        }
  }

  TEST_CASE("absent words yield nothing") {
    CHECK_FALSE(shared_hypernym(food_tree(), "yoghurt", "spaceship"));
    CHECK_FALSE(shared_hypernym(food_tree(), "spaceship", "yoghurt"));
  }

  TEST_CASE("shared_hypernym is symmetric") {
    std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail", "food"};
    for (const auto& x : words)
      for (const auto& y : words) {
        auto a = shared_hypernym(food_tree(), x, y), b = shared_hypernym(food_tree(), y, x);
        REQUIRE(a.has_value() == b.has_value());
        if (a) {
          CHECK(a->name == b->name);
          CHECK(a->d1 == b->d2);
          CHECK(a->d2 == b->d1);
        }
      }
  }

  TEST_CASE("a topic without shared hypernyms falls back to its first word") {
    std::vector<std::string> words = {"zyx", "qwv", "plk"};
    auto t = label_topic(food_tree(), words);
    CHECK(t.fallback);
    CHECK(t.label == "zyx");
    CHECK(t.label_count == 0);
    CHECK(t.total == 0);
    CHECK(t.counts.empty());
  }

  TEST_CASE("three siblings among ten words give their parent with count three") {
    auto tax = three_siblings();
    std::vector<std::string> words = {"u1", "a", "u2", "b", "u3", "u4", "sea", "u5", "u6", "u7"};
    auto t = label_topic(tax, words);
    CHECK_FALSE(t.fallback);
    CHECK(t.label == "parent");
    CHECK(t.label_count == 3);
    CHECK(t.total == 3);
  }

  TEST_CASE("label counts over the food tree words") {
    // pairs: 1 dairy_product, 1 baked_goods, 1 selling, 4 food
    std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail"};
    auto t = label_topic(food_tree(), words);
    CHECK(t.label == "food");
    CHECK(t.label_count == 4);
    CHECK(t.total == 7);
    CHECK(t.counts.at("dairy_product") == 1);
    CHECK(t.counts.at("baked_goods") == 1);
    CHECK(t.counts.at("selling") == 1);
    for (const auto& [name, n] : t.counts) CHECK(n <= t.label_count);
  }

  TEST_CASE("labels do not depend on word order") {
    std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail", "zzz"};
    auto base = label_topic(food_tree(), words);
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      rng.shuffle(words.begin(), words.end());
      auto t = label_topic(food_tree(), words);
      CHECK(t.label == base.label);
      CHECK(t.counts == base.counts);
      CHECK(t.total == base.total);
    }
  }

  TEST_CASE("equal counts go to the smaller name") {
    std::vector<std::string> words = {"wholesale", "retail", "butter", "yoghurt"};
    // selling 1, dairy_product 1, food 0: yoghurt/butter vs wholesale/retail only
    auto t = label_topic(food_tree(), words);
    CHECK(t.label == "dairy_product");
    CHECK(t.label_count == 1);
  }

  TEST_CASE("ANH arithmetic") {
    auto tally = [](std::size_t n) {
      SharedHypernymTally t;
      t.label = n ? "x" : "w";
      t.label_count = n;
      t.total = n;
      t.fallback = n == 0;
      return t;
    };
    std::vector<SharedHypernymTally> two = {tally(10), tally(30)};
    CHECK(anh(two) == 20.0);
    std::vector<SharedHypernymTally> none = {tally(0), tally(0), tally(0)};
    CHECK(anh(none) == 0.0);
    std::vector<SharedHypernymTally> four = {tally(102), tally(91), tally(74), tally(0)};
    CHECK(anh(four) == 66.75);
    std::reverse(four.begin(), four.end());
    CHECK(anh(four) == 66.75);
    CHECK_THROWS_AS(anh(std::span<const SharedHypernymTally>{}), Error);
  }

  TEST_CASE("all-hypernym mode sums every tally entry") {
    std::vector<std::string> words = {"yoghurt", "butter", "bread", "cake", "wholesale", "retail"};
    std::vector<SharedHypernymTally> ts = {label_topic(food_tree(), words)};
    CHECK(anh(ts, AnhMode::winning_label) == 4.0);
    CHECK(anh(ts, AnhMode::all_hypernyms) == 7.0);
  }

  TEST_CASE("malformed taxonomies are rejected") {
    CHECK_THROWS_AS(Taxonomy::from_json(nlohmann::json::parse(
                        R"({"a": {"hypernyms": ["b"]}, "b": {"hypernyms": ["a"]}})")),
                    Error);
    CHECK_THROWS_AS(Taxonomy::from_json(nlohmann::json::parse(R"({"a": {"hypernyms": ["ghost"]}})")),
                    Error);
    CHECK_THROWS_AS(Taxonomy::from_json(nlohmann::json::array()), Error);
  }

  TEST_CASE("depth is the shortest distance to a root") {
    auto tax = Taxonomy::from_json(nlohmann::json::parse(R"({
      "root": {"hypernyms": []}, "x": {"hypernyms": ["root"]}, "y": {"hypernyms": ["x"]},
      "z": {"hypernyms": ["y", "root"]}})"));
    CHECK(tax.depth(*tax.find_synset("root")) == 0);
    CHECK(tax.depth(*tax.find_synset("y")) == 2);
    CHECK(tax.depth(*tax.find_synset("z")) == 1);
  }

  TEST_CASE("WordNet labels an animal topic") {
    const std::filesystem::path dir = TOPICGRAPH_WORDNET_DIR;
    if (dir.empty() || !std::filesystem::exists(dir / "data.noun")) {
      MESSAGE("WordNet not configured, skipping");
      return;
    }
    static const Taxonomy wn = Taxonomy::load_wordnet(dir);
    auto h = shared_hypernym(wn, "yoghurt", "butter");
    REQUIRE(h);
    CHECK(h->name.find("dairy_product") != std::string::npos);
    std::vector<std::string> words = {"insect", "ant", "habitat", "rodent", "herbivore",
                                      "bird",   "mammal", "reptile", "predator", "beetle"};
    auto t = label_topic(wn, words);
    CHECK(t.label.rfind("animal", 0) == 0);
  }
}
