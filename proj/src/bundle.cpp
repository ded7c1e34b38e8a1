#include "topicgraph/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "topicgraph/serialize.hpp"

namespace topicgraph {

std::string truncate_text(const std::string& text, std::size_t max_chars) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) == 0x80) continue;  // continuation byte
    if (chars == max_chars) return text.substr(0, i) + "…";
    ++chars;
  }
  return text;
}

GraphBundle build_bundle(const BundleInputs& in) {
  auto require = [](const void* p, const char* stage) {
    if (!p) throw Error(std::string("bundle export is missing the '") + stage + "' stage output");
  };
  require(in.assignment, "assign");
  require(in.correlation, "correlate");
  require(in.summaries, "summarize");
  require(in.labels, "label");
  require(in.sentiment, "sentiment");
  require(in.dendrogram, "cluster");

  const std::size_t k = in.assignment->topic_count();
  if (static_cast<std::size_t>(in.correlation->values.rows()) != k || in.summaries->size() != k ||
      in.labels->size() != k || in.sentiment->mean.size() != k || in.dendrogram->leaves != k)
    throw Error("upstream stage outputs disagree on the number of topics");

  GraphBundle b;
  b.metadata = in.metadata;
  b.metadata.topics = k;
  for (std::size_t t = 0; t < k; ++t) {
    BundleNode n;
    n.id = t;
    n.auto_label = (*in.labels)[t].label;
    n.label = n.auto_label;
    n.hypernym_count = (*in.labels)[t].label_count;
    n.occurrences = in.assignment->counts[t];
    n.occurrence_fraction = in.assignment->fractions[t];
    n.sentiment = in.sentiment->mean[t];
    n.positive = in.sentiment->positive[t];
    n.neutral = in.sentiment->neutral[t];
    n.negative = in.sentiment->negative[t];
    for (const auto& w : (*in.summaries)[t].words) n.top_words.push_back({w.word, w.distance});
    for (const auto& s : (*in.summaries)[t].sentences)
      n.top_sentences.push_back({truncate_text(s.text), s.probability});
    b.nodes.push_back(std::move(n));
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      b.edges.push_back({i, j, in.correlation->values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  b.dendrogram = *in.dendrogram;
  return b;
}

nlohmann::json to_json(const GraphBundle& b) {
  using nlohmann::json;
  json nodes = json::array();
  for (const auto& n : b.nodes) {
    json words = json::array(), sentences = json::array();
    for (const auto& w : n.top_words) words.push_back({{"word", w.word}, {"distance", w.distance}});
    for (const auto& s : n.top_sentences)
      sentences.push_back({{"text", s.text}, {"probability", s.probability}});
    nodes.push_back({{"id", n.id},
                     {"label", n.label},
                     {"auto_label", n.auto_label},
                     {"hypernym_count", n.hypernym_count},
                     {"occurrences", n.occurrences},
                     {"occurrence_fraction", n.occurrence_fraction},
                     {"sentiment", n.sentiment},
                     {"sentiment_counts", {{"positive", n.positive}, {"neutral", n.neutral}, {"negative", n.negative}}},
                     {"top_words", std::move(words)},
                     {"top_sentences", std::move(sentences)}});
  }
  json edges = json::array();
  for (const auto& e : b.edges) edges.push_back({{"i", e.i}, {"j", e.j}, {"correlation", e.correlation}});
  const auto& m = b.metadata;
  json meta{{"topics", m.topics},
            {"vocab_size", m.vocab_size},
            {"seed", m.seed},
            {"config_hash", m.config_hash},
            {"corpus",
             {{"documents", m.corpus.documents},
              {"sentences", m.corpus.sentences},
              {"assigned_sentences", m.corpus.assigned_sentences},
              {"tokens", m.corpus.tokens}}}};
  return {{"format", kBundleFormat},
          {"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"dendrogram", topicgraph::to_json(b.dendrogram)},
          {"metadata", std::move(meta)}};
}

GraphBundle bundle_from_json(const nlohmann::json& j) {
  if (auto errors = validate_bundle(j); !errors.empty())
    throw Error("invalid graph bundle: " + errors.front());
  GraphBundle b;
  for (const auto& nj : j.at("nodes")) {
    BundleNode n;
    n.id = nj.at("id");
    n.label = nj.at("label");
    n.auto_label = nj.at("auto_label");
    n.hypernym_count = nj.at("hypernym_count");
    n.occurrences = nj.at("occurrences");
    n.occurrence_fraction = nj.at("occurrence_fraction");
    n.sentiment = nj.at("sentiment");
    const auto& sc = nj.at("sentiment_counts");
    n.positive = sc.at("positive");
    n.neutral = sc.at("neutral");
    n.negative = sc.at("negative");
    for (const auto& w : nj.at("top_words")) n.top_words.push_back({w.at("word"), w.at("distance")});
    for (const auto& s : nj.at("top_sentences"))
      n.top_sentences.push_back({s.at("text"), s.at("probability")});
    b.nodes.push_back(std::move(n));
  }
  for (const auto& e : j.at("edges")) b.edges.push_back({e.at("i"), e.at("j"), e.at("correlation")});
  b.dendrogram = dendrogram_from_json(j.at("dendrogram"));
  const auto& m = j.at("metadata");
  b.metadata.topics = m.at("topics");
  b.metadata.vocab_size = m.at("vocab_size");
  b.metadata.seed = m.at("seed");
  b.metadata.config_hash = m.at("config_hash");
  const auto& c = m.at("corpus");
  b.metadata.corpus = {c.at("documents"), c.at("sentences"), c.at("assigned_sentences"), c.at("tokens")};
  return b;
}

namespace {

class Checker {
 public:
  std::vector<std::string> errors;

  bool object(const nlohmann::json& j, const std::string& where) {
    if (j.is_object()) return true;
    errors.push_back(where + ": expected an object");
    return false;
  }
  bool array(const nlohmann::json& j, const std::string& where) {
    if (j.is_array()) return true;
    errors.push_back(where + ": expected an array");
    return false;
  }
  const nlohmann::json* field(const nlohmann::json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
      errors.push_back(where + ": missing '" + key + "'");
      return nullptr;
    }
    return &j.at(key);
  }
  void unsigned_int(const nlohmann::json& j, const char* key, const std::string& where) {
    auto f = field(j, key, where);
    if (f && !f->is_number_unsigned()) errors.push_back(where + "." + key + ": expected a non-negative integer");
  }
  void string(const nlohmann::json& j, const char* key, const std::string& where) {
    auto f = field(j, key, where);
    if (f && !f->is_string()) errors.push_back(where + "." + key + ": expected a string");
  }
  std::optional<double> number(const nlohmann::json& j, const char* key, const std::string& where,
                               double lo = -HUGE_VAL, double hi = HUGE_VAL) {
    auto f = field(j, key, where);
    if (!f) return std::nullopt;
    if (!f->is_number() || !std::isfinite(f->get<double>())) {
      errors.push_back(where + "." + key + ": expected a finite number");
      return std::nullopt;
    }
    double v = f->get<double>();
    if (v < lo || v > hi) {
      errors.push_back(where + "." + key + ": value out of range");
      return std::nullopt;
    }
    return v;
  }
};

}  // namespace

std::vector<std::string> validate_bundle(const nlohmann::json& j) {
  Checker c;
  if (!c.object(j, "bundle")) return c.errors;
  if (auto f = c.field(j, "format", "bundle"); f && *f != kBundleFormat)
    c.errors.push_back("bundle.format: unsupported format");

  std::set<std::size_t> ids;
  double fraction_sum = 0.0;
  if (auto nodes = c.field(j, "nodes", "bundle"); nodes && c.array(*nodes, "nodes")) {
    for (std::size_t i = 0; i < nodes->size(); ++i) {
      const auto& n = (*nodes)[i];
      const std::string at = "nodes[" + std::to_string(i) + "]";
      if (!c.object(n, at)) continue;
      c.unsigned_int(n, "id", at);
      if (n.contains("id") && n["id"].is_number_unsigned() && !ids.insert(n["id"].get<std::size_t>()).second)
        c.errors.push_back(at + ".id: duplicate node id");
      c.string(n, "label", at);
      c.string(n, "auto_label", at);
      c.unsigned_int(n, "hypernym_count", at);
      c.unsigned_int(n, "occurrences", at);
      if (auto f = c.number(n, "occurrence_fraction", at, 0.0, 1.0)) fraction_sum += *f;
      c.number(n, "sentiment", at, -1.0, 1.0);
      if (auto sc = c.field(n, "sentiment_counts", at); sc && c.object(*sc, at + ".sentiment_counts")) {
        for (const char* key : {"positive", "neutral", "negative"}) c.unsigned_int(*sc, key, at + ".sentiment_counts");
      }
      if (auto words = c.field(n, "top_words", at); words && c.array(*words, at + ".top_words")) {
        for (std::size_t w = 0; w < words->size(); ++w) {
          const std::string wat = at + ".top_words[" + std::to_string(w) + "]";
          c.string((*words)[w], "word", wat);
          c.number((*words)[w], "distance", wat, 0.0, 2.0);
        }
      }
      if (auto sents = c.field(n, "top_sentences", at); sents && c.array(*sents, at + ".top_sentences")) {
        for (std::size_t s = 0; s < sents->size(); ++s) {
          const std::string sat = at + ".top_sentences[" + std::to_string(s) + "]";
          c.string((*sents)[s], "text", sat);
          c.number((*sents)[s], "probability", sat, 0.0, 1.0);
        }
      }
    }
    if (!nodes->empty() && std::abs(fraction_sum - 1.0) > 1e-9)
      c.errors.push_back("nodes: occurrence fractions do not sum to 1");
  }

  if (auto edges = c.field(j, "edges", "bundle"); edges && c.array(*edges, "edges")) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < edges->size(); ++e) {
      const auto& ej = (*edges)[e];
      const std::string at = "edges[" + std::to_string(e) + "]";
      if (!c.object(ej, at)) continue;
      c.unsigned_int(ej, "i", at);
      c.unsigned_int(ej, "j", at);
      c.number(ej, "correlation", at, -1.0, 1.0);
      if (!ej.contains("i") || !ej.contains("j") || !ej["i"].is_number_unsigned() || !ej["j"].is_number_unsigned())
        continue;
      auto i = ej["i"].get<std::size_t>(), jj = ej["j"].get<std::size_t>();
      if (i >= jj) c.errors.push_back(at + ": requires i < j");
      if (!ids.count(i) || !ids.count(jj)) c.errors.push_back(at + ": references a missing node");
      if (!seen.emplace(i, jj).second) c.errors.push_back(at + ": duplicate edge");
    }
  }

  if (auto d = c.field(j, "dendrogram", "bundle"); d && c.object(*d, "dendrogram")) {
    c.string(*d, "linkage", "dendrogram");
    c.unsigned_int(*d, "leaves", "dendrogram");
    if (auto merges = c.field(*d, "merges", "dendrogram"); merges && c.array(*merges, "dendrogram.merges")) {
      const std::size_t leaves = d->value("leaves", std::size_t{0});
      if (leaves > 0 && merges->size() + 1 != leaves)
        c.errors.push_back("dendrogram.merges: expected leaves - 1 merges");
      if (leaves != ids.size()) c.errors.push_back("dendrogram.leaves: does not match node count");
      for (std::size_t m = 0; m < merges->size(); ++m) {
        const std::string at = "dendrogram.merges[" + std::to_string(m) + "]";
        const auto& mj = (*merges)[m];
        c.unsigned_int(mj, "a", at);
        c.unsigned_int(mj, "b", at);
        c.unsigned_int(mj, "size", at);
        c.number(mj, "distance", at, 0.0, 2.0);
      }
    }
  }

  if (auto m = c.field(j, "metadata", "bundle"); m && c.object(*m, "metadata")) {
    c.unsigned_int(*m, "topics", "metadata");
    c.unsigned_int(*m, "vocab_size", "metadata");
    c.unsigned_int(*m, "seed", "metadata");
    c.string(*m, "config_hash", "metadata");
    if (auto cs = c.field(*m, "corpus", "metadata"); cs && c.object(*cs, "metadata.corpus"))
      for (const char* key : {"documents", "sentences", "assigned_sentences", "tokens"})
        c.unsigned_int(*cs, key, "metadata.corpus");
  }
  return c.errors;
}

LabelOverride label_override_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("labels") || !j["labels"].is_object())
    throw Error("label file must look like {\"labels\": {\"<topic id>\": \"<label>\"}}");
  LabelOverride out;
  for (const auto& [key, value] : j["labels"].items()) {
    if (key.empty() || key.find_first_not_of("0123456789") != std::string::npos)
      throw Error("label file: topic id '" + key + "' is not a non-negative integer");
    if (!value.is_string()) throw Error("label file: label for topic " + key + " is not a string");
    out[std::stoul(key)] = value.get<std::string>();
  }
  return out;
}

nlohmann::json to_json(const LabelOverride& o) {
  nlohmann::json labels = nlohmann::json::object();
  for (const auto& [id, label] : o) labels[std::to_string(id)] = label;
  return {{"labels", labels}};
}

void apply_labels(GraphBundle& bundle, const LabelOverride& labels) {
  for (const auto& [id, label] : labels) {
    if (label.empty()) throw Error("empty label for topic " + std::to_string(id));
    auto it = std::find_if(bundle.nodes.begin(), bundle.nodes.end(), [&](const BundleNode& n) { return n.id == id; });
    if (it == bundle.nodes.end()) throw Error("label override names unknown topic " + std::to_string(id));
    it->label = label;
  }
}

}  // namespace topicgraph
