#include "topicgraph/embeddings.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace topicgraph {

EmbeddingTable::EmbeddingTable(std::shared_ptr<const Vocabulary> vocab, Eigen::MatrixXd matrix)
    : vocab_(std::move(vocab)), matrix_(std::move(matrix)) {
  if (!vocab_) throw Error("embedding table needs a vocabulary");
  if (static_cast<std::size_t>(matrix_.rows()) != vocab_->size())
    throw Error("embedding table rows do not match vocabulary size");
  if (!matrix_.allFinite()) throw Error("embedding table contains non-finite values");
}

void EmbeddingTable::save(std::ostream& out) const {
  char buf[32];
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i) {
    out << vocab_->word(static_cast<WordId>(i));
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix_(i, j));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

EmbeddingTable random_table(std::shared_ptr<const Vocabulary> vocab, std::size_t dim,
                            std::uint64_t seed) {
  if (dim == 0) throw Error("embedding dimension must be positive");
  const double bound = 0.1 / static_cast<double>(dim);
  Rng rng(seed);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(vocab->size()), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
  return EmbeddingTable(std::move(vocab), std::move(m));
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (in >> field) out.push_back(std::move(field));
  return out;
}

bool is_unsigned_integer(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

}  // namespace

EmbeddingTable load_pretrained(std::istream& in, std::shared_ptr<const Vocabulary> vocab,
                               std::uint64_t seed, CoverageReport* report) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::vector<std::pair<WordId, std::vector<double>>> rows;
  std::vector<bool> seen(vocab->size(), false);

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && is_unsigned_integer(fields[0]) &&
        is_unsigned_integer(fields[1]))
      continue;
    if (fields.size() < 2) throw Error("vector file line " + std::to_string(line_no) + ": no values");
    const std::size_t n = fields.size() - 1;
    if (dim == 0) dim = n;
    if (n != dim)
      throw Error("vector file line " + std::to_string(line_no) + ": expected " +
                  std::to_string(dim) + " values, found " + std::to_string(n));
    auto id = vocab->find(fields[0]);
    if (!id || seen[*id]) continue;
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
      char* end = nullptr;
      values[j] = std::strtod(fields[j + 1].c_str(), &end);
      if (*end != '\0' || !std::isfinite(values[j]))
        throw Error("vector file line " + std::to_string(line_no) + ": bad value '" +
                    fields[j + 1] + "'");
    }
    seen[*id] = true;
    rows.emplace_back(*id, std::move(values));
  }
  if (dim == 0) throw Error("vector file contains no vectors");

  auto table = random_table(vocab, dim, seed);
  for (auto& [id, values] : rows)
    for (std::size_t j = 0; j < dim; ++j) table.matrix()(id, static_cast<Eigen::Index>(j)) = values[j];
  if (report) {
    report->found = rows.size();
    report->total = vocab->size();
  }
  return table;
}

EmbeddingTable load_pretrained(const std::filesystem::path& path,
                               std::shared_ptr<const Vocabulary> vocab, std::uint64_t seed,
                               CoverageReport* report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read vector file: " + path.string());
  try {
    return load_pretrained(in, std::move(vocab), seed, report);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

double cosine(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  const double denom = a.norm() * b.norm();
  return denom == 0.0 ? 0.0 : a.dot(b) / denom;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|.
double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

class UnigramSampler {
 public:
  explicit UnigramSampler(const Vocabulary& vocab) : cdf_(vocab.size()) {
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.count(static_cast<WordId>(i))), 0.75);
      cdf_[i] = total;
    }
    for (auto& c : cdf_) c /= total;
  }
  WordId draw(Rng& rng) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), rng.uniform());
    auto i = static_cast<std::size_t>(it - cdf_.begin());
    return static_cast<WordId>(std::min(i, cdf_.size() - 1));
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

FinetuneResult finetune(const EmbeddingTable& table, std::span<const Sentence> sentences,
                        const SkipGramConfig& config) {
  FinetuneResult result{table, {}};
  if (config.epochs == 0) return result;

  std::size_t pairs_per_epoch = 0;
  for (const auto& s : sentences) {
    const std::size_t n = s.tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t lo = i >= config.window ? i - config.window : 0;
      std::size_t hi = std::min(n - 1, i + config.window);
      pairs_per_epoch += hi - lo;
    }
  }
  if (pairs_per_epoch == 0)
    throw Error("fine-tuning needs at least one sentence with two in-vocabulary tokens");

  Eigen::MatrixXd& input = result.table.matrix();
  Eigen::MatrixXd output = Eigen::MatrixXd::Zero(input.rows(), input.cols());
  UnigramSampler sampler(table.vocabulary());
  Rng rng(config.seed);

  std::vector<std::size_t> order(sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const double total_pairs = static_cast<double>(pairs_per_epoch * config.epochs);
  const double min_lr = config.lr * 1e-4;
  std::size_t done = 0;
  Eigen::VectorXd grad(input.cols());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double loss_sum = 0.0;
    for (auto si : order) {
      const auto& tokens = sentences[si].tokens;
      const std::size_t n = tokens.size();
      for (std::size_t i = 0; i < n; ++i) {
        const WordId center = tokens[i];
        std::size_t lo = i >= config.window ? i - config.window : 0;
        std::size_t hi = std::min(n - 1, i + config.window);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          const double lr = std::max(min_lr, config.lr * (1.0 - static_cast<double>(done) / total_pairs));
          ++done;
          grad.setZero();
          auto update = [&](WordId target, double label) {
            const double score = output.row(target).dot(input.row(center));
            loss_sum -= label > 0 ? log_sigmoid(score) : log_sigmoid(-score);
            const double g = lr * (label - sigmoid(score));
            grad += g * output.row(target).transpose();
            output.row(target) += g * input.row(center);
          };
          update(tokens[j], 1.0);
          for (std::size_t k = 0; k < config.negatives; ++k) {
            WordId neg = sampler.draw(rng);
            if (neg == tokens[j]) continue;
            update(neg, 0.0);
          }
          input.row(center) += grad.transpose();
        }
      }
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(pairs_per_epoch));
  }
  if (!input.allFinite()) throw Error("fine-tuning diverged (non-finite embeddings)");
  return result;
}

}  // namespace topicgraph
