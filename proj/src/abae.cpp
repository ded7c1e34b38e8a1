#include "topicgraph/abae.hpp"

#include <cmath>
#include <string>

namespace topicgraph {

namespace {

constexpr double kTinyNorm = 1e-12;

Eigen::MatrixXd gather(const Eigen::MatrixXd& embeddings, std::span<const WordId> tokens) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(tokens.size()), embeddings.cols());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= embeddings.rows()) throw Error("token id outside the embedding table");
    rows.row(static_cast<Eigen::Index>(i)) = embeddings.row(tokens[i]);
  }
  return rows;
}

// d(x/|x|) back to dx.
Eigen::VectorXd normalize_backward(const Eigen::VectorXd& unit, double norm,
                                   const Eigen::VectorXd& grad_unit) {
  return (grad_unit - unit * unit.dot(grad_unit)) / norm;
}

void check_span(std::span<const WordId> tokens) {
  if (tokens.empty()) throw Error("cannot encode a sentence without in-vocabulary tokens");
}

}  // namespace

void ModelParams::validate() const {
  const auto k = topics.rows();
  const auto e = topics.cols();
  if (k < 2) throw Error("K ≥ 2 required (got K = " + std::to_string(k) + ")");
  if (projection.rows() != k || projection.cols() != e || bias.size() != k ||
      attention.rows() != e || attention.cols() != e)
    throw Error("model parameter shapes are inconsistent");
  if (!topics.allFinite() || !projection.allFinite() || !bias.allFinite() || !attention.allFinite())
    throw Error("model parameters contain non-finite values");
}

void TrainConfig::validate() const {
  if (negatives < 1) throw Error("train config: negatives must be >= 1");
  if (!(margin > 0.0)) throw Error("train config: margin must be > 0");
  if (!(ortho_weight >= 0.0)) throw Error("train config: ortho weight must be >= 0");
  if (batch_size < 1) throw Error("train config: batch size must be >= 1");
  if (!(lr >= 0.0)) throw Error("train config: learning rate must be >= 0");
}

ModelParams init_topics(const EmbeddingTable& table, std::size_t k, std::uint64_t seed,
                        std::span<const WordId> rows) {
  if (k < 2) throw Error("K ≥ 2 required (got K = " + std::to_string(k) + ")");
  Eigen::MatrixXd points = rows.empty() ? table.matrix() : gather(table.matrix(), rows);
  if (k > static_cast<std::size_t>(points.rows()))
    throw Error("K = " + std::to_string(k) + " exceeds the vocabulary size (" +
                std::to_string(points.rows()) + ")");

  auto km = kmeans(points, k, mix_seed(seed, 0));
  ModelParams p;
  p.topics = km.centroids;
  for (Eigen::Index i = 0; i < p.topics.rows(); ++i) {
    const double norm = p.topics.row(i).norm();
    if (norm > 0.0) p.topics.row(i) /= norm;
  }
  const auto e = static_cast<Eigen::Index>(table.dim());
  const auto kk = static_cast<Eigen::Index>(k);
  Rng rng(mix_seed(seed, 1));
  p.projection.resize(kk, e);
  for (Eigen::Index i = 0; i < kk; ++i)
    for (Eigen::Index j = 0; j < e; ++j) p.projection(i, j) = rng.uniform(-0.05, 0.05);
  p.bias = Eigen::VectorXd::Zero(kk);
  p.attention = Eigen::MatrixXd::Identity(e, e);
  for (Eigen::Index i = 0; i < e; ++i)
    for (Eigen::Index j = 0; j < e; ++j) p.attention(i, j) += rng.uniform(-0.01, 0.01);
  return p;
}

Eigen::VectorXd softmax(const Eigen::Ref<const Eigen::VectorXd>& logits) {
  Eigen::VectorXd out = (logits.array() - logits.maxCoeff()).exp();
  return out / out.sum();
}

SentenceEncoding encode(const ModelParams& params, const Eigen::MatrixXd& embeddings,
                        std::span<const WordId> tokens) {
  check_span(tokens);
  const Eigen::MatrixXd rows = gather(embeddings, tokens);
  const Eigen::VectorXd mean = rows.colwise().mean().transpose();
  SentenceEncoding enc;
  enc.attention = softmax(rows * (params.attention * mean));
  enc.embedding = rows.transpose() * enc.attention;
  enc.topic_probs = softmax(params.projection * enc.embedding + params.bias);
  enc.reconstruction = params.topics.transpose() * enc.topic_probs;
  return enc;
}

double orthogonality_penalty(const Eigen::MatrixXd& topics) {
  Eigen::MatrixXd unit = topics.rowwise().normalized();
  Eigen::MatrixXd gram = unit * unit.transpose();
  gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
  return gram.squaredNorm();
}

Gradients Gradients::zeros_like(const ModelParams& p) {
  Gradients g;
  g.topics = Eigen::MatrixXd::Zero(p.topics.rows(), p.topics.cols());
  g.projection = Eigen::MatrixXd::Zero(p.projection.rows(), p.projection.cols());
  g.bias = Eigen::VectorXd::Zero(p.bias.size());
  g.attention = Eigen::MatrixXd::Zero(p.attention.rows(), p.attention.cols());
  return g;
}

double objective(const ModelParams& params, const Eigen::MatrixXd& embeddings,
                 std::span<const std::span<const WordId>> batch,
                 std::span<const std::span<const WordId>> negatives, double ortho_weight,
                 double margin, double hinge_scale, Gradients* grads) {
  if (batch.empty()) throw Error("loss needs a non-empty batch");
  if (negatives.empty() || negatives.size() % batch.size() != 0)
    throw Error("loss needs the same number (>= 1) of negatives for every batch sentence");
  const std::size_t m = negatives.size() / batch.size();
  const bool want_emb = grads && grads->embeddings.size() > 0;

  double hinge_total = 0.0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    check_span(batch[s]);
    const Eigen::MatrixXd rows = gather(embeddings, batch[s]);
    const auto n_tok = static_cast<double>(rows.rows());
    const Eigen::VectorXd mean = rows.colwise().mean().transpose();
    const Eigen::VectorXd scored = params.attention * mean;
    const Eigen::VectorXd a = softmax(rows * scored);
    const Eigen::VectorXd z = rows.transpose() * a;
    const Eigen::VectorXd p = softmax(params.projection * z + params.bias);
    const Eigen::VectorXd r = params.topics.transpose() * p;

    const double z_norm = std::max(z.norm(), kTinyNorm);
    const double r_norm = std::max(r.norm(), kTinyNorm);
    const Eigen::VectorXd zu = z / z_norm;
    const Eigen::VectorXd ru = r / r_norm;
    const double rz = ru.dot(zu);

    Eigen::VectorXd g_ru = Eigen::VectorXd::Zero(ru.size());
    Eigen::VectorXd g_zu = Eigen::VectorXd::Zero(zu.size());
    for (std::size_t j = 0; j < m; ++j) {
      const auto& neg_tokens = negatives[s * m + j];
      check_span(neg_tokens);
      const Eigen::MatrixXd neg_rows = gather(embeddings, neg_tokens);
      const Eigen::VectorXd nv = neg_rows.colwise().mean().transpose();
      const double n_norm = std::max(nv.norm(), kTinyNorm);
      const Eigen::VectorXd nu = nv / n_norm;
      const double term = margin - rz + ru.dot(nu);
      if (term <= 0.0) continue;
      hinge_total += term;
      if (!grads) continue;
      g_ru += hinge_scale * (nu - zu);
      g_zu -= hinge_scale * ru;
      if (want_emb) {
        const Eigen::VectorXd g_n = normalize_backward(nu, n_norm, hinge_scale * ru);
        for (auto t : neg_tokens)
          grads->embeddings.row(t) += g_n.transpose() / static_cast<double>(neg_tokens.size());
      }
    }
    if (!grads) continue;

    const Eigen::VectorXd g_r = normalize_backward(ru, r_norm, g_ru);
    Eigen::VectorXd g_z = normalize_backward(zu, z_norm, g_zu);

    grads->topics += p * g_r.transpose();
    const Eigen::VectorXd g_p = params.topics * g_r;
    const Eigen::VectorXd g_u = p.cwiseProduct((g_p.array() - p.dot(g_p)).matrix());
    grads->projection += g_u * z.transpose();
    grads->bias += g_u;
    g_z += params.projection.transpose() * g_u;

    const Eigen::VectorXd g_a = rows * g_z;
    const Eigen::VectorXd g_d = a.cwiseProduct((g_a.array() - a.dot(g_a)).matrix());
    const Eigen::VectorXd weighted = rows.transpose() * g_d;
    grads->attention += weighted * mean.transpose();

    if (want_emb) {
      const Eigen::VectorXd g_mean = params.attention.transpose() * weighted;
      for (std::size_t i = 0; i < batch[s].size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        Eigen::VectorXd g_e = a(ii) * g_z + g_d(ii) * scored + g_mean / n_tok;
        grads->embeddings.row(batch[s][i]) += g_e.transpose();
      }
    }
  }

  double total = hinge_scale * hinge_total;
  if (ortho_weight > 0.0) {
    const Eigen::VectorXd norms = params.topics.rowwise().norm().cwiseMax(kTinyNorm);
    Eigen::MatrixXd unit = params.topics;
    for (Eigen::Index k = 0; k < unit.rows(); ++k) unit.row(k) /= norms(k);
    Eigen::MatrixXd gram = unit * unit.transpose();
    gram -= Eigen::MatrixXd::Identity(gram.rows(), gram.cols());
    total += ortho_weight * gram.squaredNorm();
    if (grads) {
      const Eigen::MatrixXd g_unit = 4.0 * ortho_weight * gram * unit;
      for (Eigen::Index k = 0; k < unit.rows(); ++k) {
        const Eigen::VectorXd uk = unit.row(k).transpose();
        grads->topics.row(k) +=
            normalize_backward(uk, norms(k), g_unit.row(k).transpose()).transpose();
      }
    }
  }
  return total;
}

double loss(const ModelParams& params, const EmbeddingTable& table, std::span<const Sentence> batch,
            std::span<const Sentence> negatives, double ortho_weight) {
  std::vector<std::span<const WordId>> b, n;
  for (const auto& s : batch) b.emplace_back(s.tokens);
  for (const auto& s : negatives) n.emplace_back(s.tokens);
  return objective(params, table.matrix(), b, n, ortho_weight);
}

namespace {

class Adam {
 public:
  explicit Adam(double lr) : lr_(lr) {}

  void begin_step() {
    ++t_;
    c1_ = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    c2_ = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  }

  template <typename Param, typename Grad>
  void apply(std::size_t slot, Param& param, const Grad& grad) {
    if (moments_.size() <= slot) moments_.resize(slot + 1);
    auto& [m, v] = moments_[slot];
    if (m.size() == 0) {
      m = Eigen::ArrayXXd::Zero(param.rows(), param.cols());
      v = Eigen::ArrayXXd::Zero(param.rows(), param.cols());
    }
    const Eigen::ArrayXXd g = grad.array();
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.square();
    param.array() -= lr_ * (m / c1_) / ((v / c2_).sqrt() + kEps);
  }

 private:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  double lr_;
  std::size_t t_ = 0;
  double c1_ = 1.0, c2_ = 1.0;
  std::vector<std::pair<Eigen::ArrayXXd, Eigen::ArrayXXd>> moments_;
};

}  // namespace

TrainResult train(ModelParams params, const EmbeddingTable& table,
                  std::span<const Sentence> sentences, const TrainConfig& config) {
  config.validate();
  params.validate();
  if (params.dim() != table.dim()) throw Error("model and embedding dimensions differ");

  std::vector<std::span<const WordId>> pool;
  for (const auto& s : sentences)
    if (s.trainable()) pool.emplace_back(s.tokens);
  if (pool.empty()) throw Error("no trainable sentences (all sentences lack in-vocabulary tokens)");

  TrainResult result{std::move(params), table.matrix(), {}};
  ModelParams& p = result.params;
  Eigen::MatrixXd& emb = result.embeddings;

  Rng rng(config.seed);
  Adam adam(config.lr);
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<std::span<const WordId>> batch, negatives;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order.begin(), order.end());
    double epoch_total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      negatives.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(pool[order[i]]);
      for (std::size_t i = 0; i < batch.size() * config.negatives; ++i)
        negatives.push_back(pool[rng.index(pool.size())]);

      Gradients g = Gradients::zeros_like(p);
      if (config.train_embeddings) g.embeddings = Eigen::MatrixXd::Zero(emb.rows(), emb.cols());
      const double value = objective(p, emb, batch, negatives, config.ortho_weight, config.margin,
                                     1.0 / static_cast<double>(batch.size()), &g);
      if (!std::isfinite(value))
        throw Error("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(batches));

      adam.begin_step();
      adam.apply(0, p.topics, g.topics);
      adam.apply(1, p.projection, g.projection);
      adam.apply(2, p.bias, g.bias);
      adam.apply(3, p.attention, g.attention);
      if (config.train_embeddings) adam.apply(4, emb, g.embeddings);
      if (config.lr > 0.0) {
        for (Eigen::Index k = 0; k < p.topics.rows(); ++k) {
          const double norm = p.topics.row(k).norm();
          if (norm > 0.0) p.topics.row(k) /= norm;
        }
      }
      epoch_total += value;
      ++batches;
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(batches));
  }
  return result;
}

}  // namespace topicgraph
