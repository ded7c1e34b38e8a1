#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "topicgraph/corpus.hpp"
#include "topicgraph/embeddings.hpp"

namespace topicgraph {

// Attention-based topic model parameters.
//   topics      K x E, rows unit-normalized after every training step
//   projection  K x E, maps the sentence embedding to topic logits
//   bias        K
//   attention   E x E bilinear form scoring tokens against the sentence mean
struct ModelParams {
  Eigen::MatrixXd topics;
  Eigen::MatrixXd projection;
  Eigen::VectorXd bias;
  Eigen::MatrixXd attention;

  std::size_t topic_count() const { return static_cast<std::size_t>(topics.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(topics.cols()); }

  // Shape and finiteness checks; throws Error.
  void validate() const;

  bool operator==(const ModelParams& o) const {
    return topics == o.topics && projection == o.projection && bias == o.bias &&
           attention == o.attention;
  }
};

struct SentenceEncoding {
  Eigen::VectorXd attention;       // one weight per token, sums to 1
  Eigen::VectorXd embedding;       // attention-weighted token average
  Eigen::VectorXd topic_probs;     // softmax(projection * embedding + bias)
  Eigen::VectorXd reconstruction;  // topics^T * topic_probs
};

struct TrainConfig {
  std::size_t negatives = 20;
  double margin = 1.0;
  double lr = 0.001;
  std::size_t epochs = 15;
  std::size_t batch_size = 50;
  double ortho_weight = 0.1;
  std::uint64_t seed = 1;
  bool train_embeddings = false;

  void validate() const;
};

struct KMeansResult {
  Eigen::MatrixXd centroids;  // k x dim
  std::vector<std::size_t> assignment;
  double sse = 0.0;
  std::size_t iterations = 0;
};

// k-means++ seeding, Lloyd iterations to an assignment fixpoint (at most
// max_iterations), then single-point Hartigan moves while they lower the SSE.
// Ties in assignment go to the lowest centroid index.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                    std::size_t max_iterations = 100);

// Topic rows start as row-normalized k-means centroids over the embedding
// rows (all rows, or only `rows` when non-empty). projection ~ U(-0.05, 0.05),
// bias = 0, attention = I + U(-0.01, 0.01).
ModelParams init_topics(const EmbeddingTable& table, std::size_t k, std::uint64_t seed,
                        std::span<const WordId> rows = {});

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits);

SentenceEncoding encode(const ModelParams& params, const Eigen::MatrixXd& embeddings,
                        std::span<const WordId> tokens);
inline SentenceEncoding encode(const ModelParams& params, const EmbeddingTable& table,
                               const Sentence& sentence) {
  return encode(params, table.matrix(), sentence.tokens);
}

// ||Tn Tn^T - I||_F^2 with Tn the row-normalized topic matrix.
double orthogonality_penalty(const Eigen::MatrixXd& topics);

struct Gradients {
  Eigen::MatrixXd topics;
  Eigen::MatrixXd projection;
  Eigen::VectorXd bias;
  Eigen::MatrixXd attention;
  Eigen::MatrixXd embeddings;  // empty unless requested

  static Gradients zeros_like(const ModelParams& p);
};

// Objective  hinge_scale * sum_s sum_i max(0, margin - r.z + r.n_i) + ortho_weight * U
// with r, z, n unit-normalized; the negatives of batch sentence s are
// negatives[s*m .. s*m+m). Gradients are accumulated into `grads` when given.
double objective(const ModelParams& params, const Eigen::MatrixXd& embeddings,
                 std::span<const std::span<const WordId>> batch,
                 std::span<const std::span<const WordId>> negatives, double ortho_weight,
                 double margin = 1.0, double hinge_scale = 1.0, Gradients* grads = nullptr);

// The contrastive max-margin loss with margin 1 and unit hinge scale.
double loss(const ModelParams& params, const EmbeddingTable& table, std::span<const Sentence> batch,
            std::span<const Sentence> negatives, double ortho_weight);

struct TrainResult {
  ModelParams params;
  Eigen::MatrixXd embeddings;      // updated copy when TrainConfig::train_embeddings
  std::vector<double> epoch_loss;  // mean batch objective per epoch
};

// Adam on mini-batches. Each batch minimizes mean hinge + ortho_weight * U.
// Throws Error naming epoch and batch if the objective turns non-finite.
TrainResult train(ModelParams params, const EmbeddingTable& table,
                  std::span<const Sentence> sentences, const TrainConfig& config);

}  // namespace topicgraph
