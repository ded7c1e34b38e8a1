#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topicgraph/corpus.hpp"

namespace topicgraph {

// Row i holds the vector of vocabulary word i.
class EmbeddingTable {
 public:
  EmbeddingTable(std::shared_ptr<const Vocabulary> vocab, Eigen::MatrixXd matrix);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  Eigen::MatrixXd& matrix() { return matrix_; }
  const Vocabulary& vocabulary() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> vocabulary_ptr() const { return vocab_; }

  auto row(WordId id) const { return matrix_.row(id); }

  // `word v1 ... vE` per line, ordered by vocabulary id, 17 significant digits.
  void save(std::ostream& out) const;

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  Eigen::MatrixXd matrix_;
};

struct CoverageReport {
  std::size_t found = 0;
  std::size_t total = 0;
  double coverage() const { return total == 0 ? 0.0 : static_cast<double>(found) / total; }
};

// Every vocabulary row starts from seeded uniform(-0.1/E, 0.1/E).
EmbeddingTable random_table(std::shared_ptr<const Vocabulary> vocab, std::size_t dim,
                            std::uint64_t seed);

// Text vector format; an optional `<count> <dim>` header line is skipped.
// Vocabulary words missing from the file keep their random initialization.
EmbeddingTable load_pretrained(const std::filesystem::path& path,
                               std::shared_ptr<const Vocabulary> vocab, std::uint64_t seed,
                               CoverageReport* report = nullptr);
EmbeddingTable load_pretrained(std::istream& in, std::shared_ptr<const Vocabulary> vocab,
                               std::uint64_t seed, CoverageReport* report = nullptr);

struct SkipGramConfig {
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;  // decays linearly to lr * 1e-4
  std::uint64_t seed = 1;
};

struct FinetuneResult {
  EmbeddingTable table;
  std::vector<double> epoch_loss;  // mean negative-sampling loss per training pair
};

// Skip-gram with negative sampling, single worker, deterministic for a seed.
// The returned table is an updated copy; context vectors are discarded.
FinetuneResult finetune(const EmbeddingTable& table, std::span<const Sentence> sentences,
                        const SkipGramConfig& config);

double cosine(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace topicgraph
