#include "topicgraph/config.hpp"

#include <functional>
#include <map>

#include "topicgraph/serialize.hpp"

namespace topicgraph {

namespace fs = std::filesystem;

namespace {

struct Field {
  std::function<void(Config&, const json&)> read;
  std::function<json(const Config&)> write;
  bool pipeline = true;  // part of the config hash
};

fs::path resolve(const Config& c, const json& j) {
  fs::path p = j.get<std::string>();
  return p.is_relative() ? c.base_dir / p : p;
}

json relative(const Config& c, const fs::path& p) {
  if (c.base_dir.empty() || p.is_relative()) return p.generic_string();
  auto rel = p.lexically_relative(c.base_dir);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

template <typename T>
T get_number(const json& j) {
  if constexpr (std::is_same_v<T, double>) {
    if (!j.is_number()) throw Error("expected a number");
  } else {
    if (!j.is_number_unsigned()) throw Error("expected a non-negative integer");
  }
  return j.get<T>();
}

template <typename T, typename M>
Field number(M member, bool pipeline = true) {
  return {[member](Config& c, const json& j) { c.*member = get_number<T>(j); },
          [member](const Config& c) { return json(c.*member); }, pipeline};
}

template <typename T, typename M>
Field train_number(M member) {
  return {[member](Config& c, const json& j) { c.train.*member = get_number<T>(j); },
          [member](const Config& c) { return json(c.train.*member); }};
}

Field optional_path(std::optional<fs::path> Config::*member, bool pipeline = true) {
  return {[member](Config& c, const json& j) {
            if (j.is_null()) c.*member = std::nullopt;
            else c.*member = resolve(c, j);
          },
          [member](const Config& c) { return (c.*member) ? relative(c, *(c.*member)) : json(nullptr); },
          pipeline};
}

template <typename T>
Field number_list(std::vector<T> Config::*member) {
  return {[member](Config& c, const json& j) {
            if (!j.is_array()) throw Error("expected an array");
            (c.*member).clear();
            for (const auto& v : j) (c.*member).push_back(get_number<T>(v));
          },
          [member](const Config& c) { return json(c.*member); }, false};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"corpus",
       {[](Config& c, const json& j) {
          c.corpus.clear();
          if (j.is_string()) c.corpus.push_back(resolve(c, j));
          else if (j.is_array()) for (const auto& p : j) c.corpus.push_back(resolve(c, p));
          else throw Error("expected a path or an array of paths");
        },
        [](const Config& c) {
          json out = json::array();
          for (const auto& p : c.corpus) out.push_back(relative(c, p));
          return out;
        }}},
      {"corpus_format",
       {[](Config& c, const json& j) {
          const auto s = j.get<std::string>();
          if (s == "lines") c.corpus_format = InputFormat::lines;
          else if (s == "jsonl") c.corpus_format = InputFormat::json_lines;
          else throw Error("expected \"lines\" or \"jsonl\"");
        },
        [](const Config& c) { return json(c.corpus_format == InputFormat::lines ? "lines" : "jsonl"); }}},
      {"nb_training", optional_path(&Config::nb_training)},
      {"nb_keywords",
       {[](Config& c, const json& j) { c.nb_keywords = j.get<std::vector<std::string>>(); },
        [](const Config& c) { return json(c.nb_keywords); }}},
      {"nb_alpha", number<double>(&Config::nb_alpha)},
      {"vocab_size", number<std::size_t>(&Config::vocab_size)},
      {"min_count", number<std::size_t>(&Config::min_count)},
      {"embeddings", optional_path(&Config::embeddings)},
      {"embedding_dim", number<std::size_t>(&Config::embedding_dim)},
      {"finetune_epochs", number<std::size_t>(&Config::finetune_epochs)},
      {"finetune_window", number<std::size_t>(&Config::finetune_window)},
      {"finetune_negatives", number<std::size_t>(&Config::finetune_negatives)},
      {"finetune_lr", number<double>(&Config::finetune_lr)},
      {"topics", number<std::size_t>(&Config::topics)},
      {"init_vocab_limit", number<std::size_t>(&Config::init_vocab_limit)},
      {"negatives", train_number<std::size_t>(&TrainConfig::negatives)},
      {"margin", train_number<double>(&TrainConfig::margin)},
      {"lr", train_number<double>(&TrainConfig::lr)},
      {"epochs", train_number<std::size_t>(&TrainConfig::epochs)},
      {"batch_size", train_number<std::size_t>(&TrainConfig::batch_size)},
      {"ortho_weight", train_number<double>(&TrainConfig::ortho_weight)},
      {"train_embeddings",
       {[](Config& c, const json& j) {
          if (!j.is_boolean()) throw Error("expected true or false");
          c.train.train_embeddings = j.get<bool>();
        },
        [](const Config& c) { return json(c.train.train_embeddings); }}},
      {"seed", number<std::uint64_t>(&Config::seed)},
      {"top_words", number<std::size_t>(&Config::top_words)},
      {"top_sentences", number<std::size_t>(&Config::top_sentences)},
      {"taxonomy", optional_path(&Config::taxonomy)},
      {"lexicon", optional_path(&Config::lexicon)},
      {"boosters", optional_path(&Config::boosters)},
      {"negations", optional_path(&Config::negations)},
      {"pos_threshold", number<double>(&Config::pos_threshold)},
      {"neg_threshold", number<double>(&Config::neg_threshold)},
      {"linkage",
       {[](Config& c, const json& j) { c.linkage = parse_linkage(j.get<std::string>()); },
        [](const Config& c) { return json(std::string(to_string(c.linkage))); }}},
      {"labels", optional_path(&Config::labels)},
      {"output",
       {[](Config& c, const json& j) { c.output = resolve(c, j); },
        [](const Config& c) { return relative(c, c.output); }, false}},
      {"cache_dir", optional_path(&Config::cache_dir, false)},
      {"sweep_topics", number_list(&Config::sweep_topics)},
      {"sweep_vocab_sizes", number_list(&Config::sweep_vocab_sizes)},
      {"sweep_seeds", number_list(&Config::sweep_seeds)},
      {"sweep_budget", number<std::size_t>(&Config::sweep_budget, false)},
      {"sweep_workers", number<std::size_t>(&Config::sweep_workers, false)},
      {"anh_mode",
       {[](Config& c, const json& j) {
          const auto s = j.get<std::string>();
          if (s == "winning_label") c.anh_mode = AnhMode::winning_label;
          else if (s == "all_hypernyms") c.anh_mode = AnhMode::all_hypernyms;
          else throw Error("expected \"winning_label\" or \"all_hypernyms\"");
        },
        [](const Config& c) {
          return json(c.anh_mode == AnhMode::winning_label ? "winning_label" : "all_hypernyms");
        },
        false}},
      {"sweep_report",
       {[](Config& c, const json& j) { c.sweep_report = resolve(c, j); },
        [](const Config& c) { return relative(c, c.sweep_report); }, false}},
  };
  return table;
}

const Field* find_field(const std::string& key) {
  for (const auto& [name, f] : fields())
    if (name == key) return &f;
  return nullptr;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, f] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void Config::validate() const {
  if (!(neg_threshold < pos_threshold))
    throw Error("config: neg_threshold must be below pos_threshold");
  if (top_words == 0) throw Error("config: top_words must be at least 1");
}

SkipGramConfig Config::skipgram() const {
  SkipGramConfig s;
  s.window = finetune_window;
  s.negatives = finetune_negatives;
  s.epochs = finetune_epochs;
  s.lr = finetune_lr;
  s.seed = mix_seed(seed, 7);
  return s;
}

TrainConfig Config::train_config() const {
  TrainConfig t = train;
  t.seed = seed;
  return t;
}

Config config_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw Error("config must be a JSON object");
  Config c;
  c.base_dir = base_dir;
  for (const auto& [key, value] : doc.items()) {
    const Field* f = find_field(key);
    if (!f) throw Error("unknown config key '" + key + "'");
    try {
      f->read(c, value);
    } catch (const nlohmann::json::exception&) {
      throw Error("config key '" + key + "': wrong value type");
    } catch (const Error& e) {
      throw Error("config key '" + key + "': " + e.what());
    }
  }
  // defaults are relative to the config too
  if (c.output.is_relative()) c.output = c.base_dir / c.output;
  if (c.sweep_report.is_relative()) c.sweep_report = c.base_dir / c.sweep_report;
  c.validate();
  return c;
}

Config load_config(const fs::path& path) {
  auto base = fs::absolute(path).parent_path();
  return config_from_json(read_json_file(path), base);
}

json to_json(const Config& c) {
  json out = json::object();
  for (const auto& [name, f] : fields()) out[name] = f.write(c);
  return out;
}

std::string Config::hash() const {
  json relevant = json::object();
  for (const auto& [name, f] : fields())
    if (f.pipeline) relevant[name] = f.write(*this);
  return Fnv1a().update(relevant.dump()).hex();
}

void apply_override(json& doc, const std::string& key, const std::string& value) {
  if (!find_field(key)) throw Error("unknown config key '" + key + "'");
  auto parsed = json::parse(value, nullptr, false);
  doc[key] = parsed.is_discarded() ? json(value) : parsed;
}

}  // namespace topicgraph
