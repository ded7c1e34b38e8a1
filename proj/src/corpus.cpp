#include "topicgraph/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace topicgraph {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

}  // namespace

std::size_t Corpus::sentence_count() const {
  std::size_t n = 0;
  for (const auto& doc : documents) n += doc.sentences.size();
  return n;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const std::size_t n = text.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
      continue;
    }
    bool joiner = (c == '-' || c == '\'') && !current.empty() && i + 1 < n &&
                  is_word_byte(static_cast<unsigned char>(text[i + 1]));
    if (joiner) {
      current.push_back(static_cast<char>(c));
      continue;
    }
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    auto piece = trim(text.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
      flush(i + 1);
    }
  }
  flush(text.size());
  return out;
}

std::optional<Document> make_document(std::size_t id, std::string_view text) {
  if (is_blank(text)) return std::nullopt;
  Document doc;
  doc.id = id;
  doc.raw_text = std::string(trim(text));
  std::size_t index = 0;
  for (auto& piece : split_sentences(doc.raw_text)) {
    Sentence s;
    s.doc_id = id;
    s.index = index++;
    s.words = tokenize(piece);
    s.raw = std::move(piece);
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

Corpus ingest(std::span<const std::filesystem::path> paths, InputFormat format) {
  Corpus corpus;
  std::unordered_set<std::size_t> used_ids;
  std::size_t next_id = 0;
  auto take_next_id = [&] {
    while (used_ids.count(next_id)) ++next_id;
    return next_id;
  };

  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read input file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_blank(line)) continue;

      std::string text;
      std::optional<std::size_t> explicit_id;
      if (format == InputFormat::lines) {
        text = line;
      } else {
        auto record = nlohmann::json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object() || !record.contains("text") ||
            !record["text"].is_string()) {
          ++corpus.malformed_records;
          continue;
        }
        text = record["text"].get<std::string>();
        if (record.contains("id")) {
          const auto& id = record["id"];
          if (!id.is_number_unsigned() || used_ids.count(id.get<std::size_t>())) {
            ++corpus.malformed_records;
            continue;
          }
          explicit_id = id.get<std::size_t>();
        }
      }
      std::size_t id = explicit_id ? *explicit_id : take_next_id();
      if (auto doc = make_document(id, text)) {
        used_ids.insert(id);
        corpus.documents.push_back(std::move(*doc));
      }
    }
    if (in.bad()) throw Error("error while reading input file: " + path.string());
  }
  if (corpus.malformed_records > 0) {
    std::cerr << "warning: skipped " << corpus.malformed_records << " malformed record(s)\n";
  }
  return corpus;
}

// --- Vocabulary -------------------------------------------------------------

Vocabulary Vocabulary::build(const Corpus& corpus, std::size_t max_size, std::size_t min_count) {
  if (max_size < 1) throw Error("vocabulary max_size must be >= 1");
  if (min_count < 1) throw Error("vocabulary min_count must be >= 1");
  if (corpus.sentence_count() == 0) throw Error("cannot build a vocabulary from an empty corpus");

  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& doc : corpus.documents)
    for (const auto& s : doc.sentences)
      for (const auto& w : s.words) ++counts[w];

  std::vector<std::pair<std::string, std::uint64_t>> ranked;
  ranked.reserve(counts.size());
  for (auto& [w, c] : counts)
    if (c >= min_count) ranked.emplace_back(w, c);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size) ranked.resize(max_size);
  return from_ranked(std::move(ranked), max_size);
}

Vocabulary Vocabulary::from_ranked(std::vector<std::pair<std::string, std::uint64_t>> entries,
                                   std::size_t max_size) {
  Vocabulary v;
  v.max_size_ = max_size == 0 ? entries.size() : max_size;
  if (entries.size() > v.max_size_) throw Error("vocabulary exceeds its max_size");
  for (auto& [w, c] : entries) {
    auto id = static_cast<WordId>(v.words_.size());
    if (!v.index_.emplace(w, id).second) throw Error("duplicate vocabulary word: " + w);
    v.words_.push_back(std::move(w));
    v.counts_.push_back(c);
  }
  return v;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::save(std::ostream& out) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    out << words_[i] << '\t' << i << '\t' << counts_[i] << '\n';
}

Vocabulary Vocabulary::load(std::istream& in, std::size_t max_size) {
  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    std::size_t id = 0;
    std::uint64_t count = 0;
    if (!std::getline(fields, word, '\t') || !(fields >> id >> count) || id != entries.size())
      throw Error("malformed vocabulary line " + std::to_string(line_no));
    entries.emplace_back(std::move(word), count);
  }
  return from_ranked(std::move(entries), max_size);
}

void index_corpus(Corpus& corpus, const Vocabulary& vocab) {
  for (auto& doc : corpus.documents) {
    for (auto& s : doc.sentences) {
      s.tokens.clear();
      for (const auto& w : s.words)
        if (auto id = vocab.find(w)) s.tokens.push_back(*id);
    }
  }
}

std::vector<Sentence> trainable_sentences(const Corpus& corpus) {
  std::vector<Sentence> out;
  for (const auto& doc : corpus.documents)
    for (const auto& s : doc.sentences)
      if (s.trainable()) out.push_back(s);
  return out;
}

}  // namespace topicgraph
