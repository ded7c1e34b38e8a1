#include "topicgraph/serialize.hpp"

#include <fstream>
#include <sstream>

namespace topicgraph {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw Error("matrix must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error("matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw Error("vector must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

json to_json(const TrainConfig& c) {
  return {{"negatives", c.negatives}, {"margin", c.margin},           {"lr", c.lr},
          {"epochs", c.epochs},       {"batch_size", c.batch_size},   {"ortho_weight", c.ortho_weight},
          {"seed", c.seed},           {"train_embeddings", c.train_embeddings}};
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig c;
  c.negatives = j.value("negatives", c.negatives);
  c.margin = j.value("margin", c.margin);
  c.lr = j.value("lr", c.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.ortho_weight = j.value("ortho_weight", c.ortho_weight);
  c.seed = j.value("seed", c.seed);
  c.train_embeddings = j.value("train_embeddings", c.train_embeddings);
  return c;
}

json checkpoint_to_json(const ModelParams& p, const TrainConfig& config,
                        const std::vector<double>& loss_history) {
  return {{"format", "topicgraph-checkpoint/1"},
          {"shape", {{"topics", p.topic_count()}, {"dim", p.dim()}}},
          {"seed", config.seed},
          {"config", to_json(config)},
          {"tensors",
           {{"topics", matrix_to_json(p.topics)},
            {"projection", matrix_to_json(p.projection)},
            {"bias", vector_to_json(p.bias)},
            {"attention", matrix_to_json(p.attention)}}},
          {"loss_history", loss_history}};
}

ModelParams checkpoint_from_json(const json& j, TrainConfig* config,
                                 std::vector<double>* loss_history) {
  const auto& t = j.at("tensors");
  ModelParams p;
  p.topics = matrix_from_json(t.at("topics"));
  p.projection = matrix_from_json(t.at("projection"));
  p.bias = vector_from_json(t.at("bias"));
  p.attention = matrix_from_json(t.at("attention"));
  const auto& shape = j.at("shape");
  if (shape.at("topics").get<std::size_t>() != p.topic_count() ||
      shape.at("dim").get<std::size_t>() != p.dim())
    throw Error("checkpoint shape metadata does not match its tensors");
  p.validate();
  if (config) *config = train_config_from_json(j.at("config"));
  if (loss_history) *loss_history = j.value("loss_history", std::vector<double>{});
  return p;
}

json to_json(const Corpus& c) {
  json docs = json::array();
  for (const auto& d : c.documents) {
    json sentences = json::array();
    for (const auto& s : d.sentences) sentences.push_back({{"raw", s.raw}, {"words", s.words}});
    docs.push_back({{"id", d.id}, {"text", d.raw_text}, {"sentences", std::move(sentences)}});
  }
  return {{"documents", std::move(docs)}, {"malformed_records", c.malformed_records}};
}

Corpus corpus_from_json(const json& j) {
  Corpus c;
  c.malformed_records = j.value("malformed_records", std::size_t{0});
  for (const auto& dj : j.at("documents")) {
    Document d;
    d.id = dj.at("id").get<std::size_t>();
    d.raw_text = dj.at("text").get<std::string>();
    for (const auto& sj : dj.at("sentences")) {
      Sentence s;
      s.doc_id = d.id;
      s.index = d.sentences.size();
      s.raw = sj.at("raw").get<std::string>();
      s.words = sj.at("words").get<std::vector<std::string>>();
      d.sentences.push_back(std::move(s));
    }
    c.documents.push_back(std::move(d));
  }
  return c;
}

json to_json(const CorrelationMatrix& c) {
  std::vector<bool> zv = c.zero_variance;
  return {{"values", matrix_to_json(c.values)}, {"zero_variance", zv}};
}

CorrelationMatrix correlation_from_json(const json& j) {
  CorrelationMatrix c;
  c.values = matrix_from_json(j.at("values"));
  c.zero_variance = j.at("zero_variance").get<std::vector<bool>>();
  return c;
}

json to_json(const TopicSummary& s) {
  json words = json::array(), sentences = json::array();
  for (const auto& w : s.words) words.push_back({{"word", w.word}, {"distance", w.distance}});
  for (const auto& r : s.sentences)
    sentences.push_back({{"sentence", r.sentence}, {"text", r.text}, {"probability", r.probability}});
  return {{"topic", s.topic}, {"words", std::move(words)}, {"sentences", std::move(sentences)}};
}

TopicSummary summary_from_json(const json& j) {
  TopicSummary s;
  s.topic = j.at("topic").get<std::size_t>();
  for (const auto& w : j.at("words")) s.words.push_back({w.at("word"), w.at("distance")});
  for (const auto& r : j.at("sentences"))
    s.sentences.push_back({r.at("sentence"), r.at("text"), r.at("probability")});
  return s;
}

json to_json(const SharedHypernymTally& t) {
  return {{"counts", t.counts},           {"label", t.label}, {"label_count", t.label_count},
          {"total", t.total},             {"fallback", t.fallback}};
}

SharedHypernymTally tally_from_json(const json& j) {
  SharedHypernymTally t;
  t.counts = j.at("counts").get<std::map<std::string, std::size_t>>();
  t.label = j.at("label").get<std::string>();
  t.label_count = j.at("label_count").get<std::size_t>();
  t.total = j.at("total").get<std::size_t>();
  t.fallback = j.at("fallback").get<bool>();
  return t;
}

namespace {
std::string_view polarity_name(Polarity p) {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::neutral: break;
  }
  return "neutral";
}
Polarity parse_polarity(const std::string& s) {
  if (s == "positive") return Polarity::positive;
  if (s == "negative") return Polarity::negative;
  return Polarity::neutral;
}
}  // namespace

json to_json(const TopicSentiment& t) {
  json polarity = json::array();
  for (auto p : t.polarity) polarity.push_back(polarity_name(p));
  std::vector<bool> empty = t.empty;
  return {{"mean", t.mean},         {"polarity", polarity},   {"positive", t.positive},
          {"neutral", t.neutral},   {"negative", t.negative}, {"empty", empty}};
}

TopicSentiment topic_sentiment_from_json(const json& j) {
  TopicSentiment t;
  t.mean = j.at("mean").get<std::vector<double>>();
  for (const auto& p : j.at("polarity")) t.polarity.push_back(parse_polarity(p.get<std::string>()));
  t.positive = j.at("positive").get<std::vector<std::size_t>>();
  t.neutral = j.at("neutral").get<std::vector<std::size_t>>();
  t.negative = j.at("negative").get<std::vector<std::size_t>>();
  t.empty = j.at("empty").get<std::vector<bool>>();
  return t;
}

json to_json(const Dendrogram& d) {
  json merges = json::array();
  for (const auto& m : d.merges)
    merges.push_back({{"a", m.a}, {"b", m.b}, {"distance", m.distance}, {"size", m.size}});
  return {{"linkage", to_string(d.linkage)}, {"leaves", d.leaves}, {"merges", std::move(merges)}};
}

Dendrogram dendrogram_from_json(const json& j) {
  Dendrogram d;
  d.linkage = parse_linkage(j.at("linkage").get<std::string>());
  d.leaves = j.at("leaves").get<std::size_t>();
  for (const auto& m : j.at("merges"))
    d.merges.push_back({m.at("a"), m.at("b"), m.at("distance"), m.at("size")});
  return d;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error("invalid JSON in " + path.string());
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << contents;
    if (!out.flush()) throw Error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path& path, const json& doc, int indent) {
  write_text_file(path, doc.dump(indent) + "\n");
}

}  // namespace topicgraph
