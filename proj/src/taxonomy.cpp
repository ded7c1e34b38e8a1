#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>

#include "topicgraph/common.hpp"
#include "topicgraph/labeling.hpp"

namespace topicgraph {

namespace {

std::string normalize_lemma(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  for (char c : word) {
    if (c == ' ')
      out.push_back('_');
    else
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace

class Taxonomy::Builder {
 public:
  SynsetId add(std::string name, std::vector<std::string> lemmas) {
    auto id = static_cast<SynsetId>(tax_.names_.size());
    tax_.names_.push_back(std::move(name));
    tax_.parents_.emplace_back();
    for (auto& l : lemmas) {
      auto& senses = tax_.lemma_index_[normalize_lemma(l)];
      if (std::find(senses.begin(), senses.end(), id) == senses.end()) senses.push_back(id);
    }
    return id;
  }
  void link(SynsetId child, SynsetId parent) {
    auto& ps = tax_.parents_[child];
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) ps.push_back(parent);
  }
  void exception(std::string inflected, std::vector<std::string> bases) {
    tax_.exceptions_[std::move(inflected)] = std::move(bases);
  }
  Taxonomy finish() {
    tax_.finalize();
    return std::move(tax_);
  }

 private:
  Taxonomy tax_;
};

void Taxonomy::finalize() {
  name_index_.clear();
  for (SynsetId s = 0; s < names_.size(); ++s) name_index_.emplace(names_[s], s);

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  depth_.assign(names_.size(), kUnset);
  std::vector<std::uint8_t> state(names_.size(), 0);  // 0 new, 1 on stack, 2 done

  // Iterative post-order DFS; a back edge to an on-stack node is a cycle.
  for (SynsetId start = 0; start < names_.size(); ++start) {
    if (state[start] == 2) continue;
    std::vector<std::pair<SynsetId, std::size_t>> stack{{start, 0}};
    state[start] = 1;
    while (!stack.empty()) {
      auto& [s, next] = stack.back();
      if (next < parents_[s].size()) {
        SynsetId p = parents_[s][next++];
        if (state[p] == 1) throw Error("hypernym cycle through synset '" + names_[p] + "'");
        if (state[p] == 0) {
          state[p] = 1;
          stack.emplace_back(p, 0);
        }
        continue;
      }
      std::size_t d = parents_[s].empty() ? 0 : kUnset;
      for (auto p : parents_[s]) d = std::min(d, depth_[p] + 1);
      depth_[s] = d;
      state[s] = 2;
      stack.pop_back();
    }
  }
}

std::optional<Taxonomy::SynsetId> Taxonomy::find_synset(std::string_view name) const {
  auto it = name_index_.find(std::string(name));
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Taxonomy::SynsetId> Taxonomy::lookup(const std::string& lemma) const {
  auto it = lemma_index_.find(lemma);
  return it == lemma_index_.end() ? std::vector<SynsetId>{} : it->second;
}

std::vector<Taxonomy::SynsetId> Taxonomy::senses(std::string_view word) const {
  const std::string lemma = normalize_lemma(word);
  if (auto direct = lookup(lemma); !direct.empty()) return direct;

  std::vector<std::string> bases;
  if (auto it = exceptions_.find(lemma); it != exceptions_.end()) bases = it->second;
  static const std::pair<std::string_view, std::string_view> kRules[] = {
      {"s", ""},     {"ses", "s"},   {"xes", "x"},   {"zes", "z"},
      {"ches", "ch"}, {"shes", "sh"}, {"men", "man"}, {"ies", "y"}};
  for (auto [suffix, replacement] : kRules) {
    if (lemma.size() > suffix.size() && lemma.ends_with(suffix))
      bases.push_back(lemma.substr(0, lemma.size() - suffix.size()) + std::string(replacement));
  }
  std::vector<SynsetId> out;
  for (const auto& b : bases)
    for (auto s : lookup(b))
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

std::unordered_map<Taxonomy::SynsetId, std::size_t> Taxonomy::ancestors(SynsetId s) const {
  std::unordered_map<SynsetId, std::size_t> dist{{s, 0}};
  std::deque<SynsetId> queue{s};
  while (!queue.empty()) {
    SynsetId cur = queue.front();
    queue.pop_front();
    for (auto p : parents_[cur]) {
      if (dist.emplace(p, dist[cur] + 1).second) queue.push_back(p);
    }
  }
  return dist;
}

Taxonomy Taxonomy::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error("taxonomy JSON must be an object of synsets");
  Builder b;
  std::unordered_map<std::string, SynsetId> ids;
  for (const auto& [name, entry] : doc.items()) {
    if (!entry.is_object()) throw Error("taxonomy synset '" + name + "' must be an object");
    std::vector<std::string> words;
    if (entry.contains("words")) {
      for (const auto& w : entry.at("words")) words.push_back(w.get<std::string>());
    } else {
      words.push_back(name);
    }
    ids.emplace(name, b.add(name, std::move(words)));
  }
  for (const auto& [name, entry] : doc.items()) {
    if (!entry.contains("hypernyms")) continue;
    for (const auto& h : entry.at("hypernyms")) {
      auto parent = h.get<std::string>();
      auto it = ids.find(parent);
      if (it == ids.end())
        throw Error("synset '" + name + "' names unknown hypernym '" + parent + "'");
      b.link(ids.at(name), it->second);
    }
  }
  return b.finish();
}

Taxonomy Taxonomy::load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read taxonomy file: " + path.string());
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw Error("taxonomy file is not valid JSON: " + path.string());
  return from_json(doc);
}

Taxonomy Taxonomy::load_wordnet(const std::filesystem::path& dir) {
  const auto data_path = dir / "data.noun";
  std::ifstream data(data_path);
  if (!data) throw Error("cannot read WordNet noun data: " + data_path.string());

  struct Raw {
    std::vector<std::string> lemmas;
    std::vector<std::string> parent_offsets;
  };
  std::vector<std::pair<std::string, Raw>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(data, line)) {
    ++line_no;
    if (line.empty() || line[0] == ' ') continue;  // license header
    std::istringstream in(line.substr(0, line.find(" | ")));
    std::string offset, lex_file, ss_type, w_cnt_hex;
    if (!(in >> offset >> lex_file >> ss_type >> w_cnt_hex))
      throw Error("data.noun line " + std::to_string(line_no) + ": truncated synset header");
    Raw r;
    const auto w_cnt = std::stoul(w_cnt_hex, nullptr, 16);
    for (unsigned long i = 0; i < w_cnt; ++i) {
      std::string lemma, lex_id;
      in >> lemma >> lex_id;
      r.lemmas.push_back(normalize_lemma(lemma));
    }
    std::size_t p_cnt = 0;
    in >> p_cnt;
    for (std::size_t i = 0; i < p_cnt; ++i) {
      std::string symbol, target, pos, source_target;
      in >> symbol >> target >> pos >> source_target;
      if ((symbol == "@" || symbol == "@i") && pos == "n") r.parent_offsets.push_back(target);
    }
    if (!in || r.lemmas.empty())
      throw Error("data.noun line " + std::to_string(line_no) + ": malformed synset");
    raw.emplace_back(offset, std::move(r));
  }

  Builder b;
  std::unordered_map<std::string, SynsetId> by_offset;
  for (auto& [offset, r] : raw) by_offset.emplace(offset, b.add(r.lemmas.front(), r.lemmas));
  for (auto& [offset, r] : raw) {
    for (const auto& p : r.parent_offsets) {
      auto it = by_offset.find(p);
      if (it == by_offset.end()) throw Error("data.noun: dangling hypernym pointer " + p);
      b.link(by_offset.at(offset), it->second);
    }
  }

  std::ifstream exc(dir / "noun.exc");
  while (exc && std::getline(exc, line)) {
    std::istringstream in(line);
    std::string inflected, base;
    std::vector<std::string> bases;
    in >> inflected;
    while (in >> base) bases.push_back(base);
    if (!inflected.empty() && !bases.empty()) b.exception(inflected, std::move(bases));
  }
  return b.finish();
}

}  // namespace topicgraph
