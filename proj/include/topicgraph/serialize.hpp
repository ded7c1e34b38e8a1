#pragma once

#include <filesystem>

#include <json.hpp>

#include "topicgraph/abae.hpp"
#include "topicgraph/cluster.hpp"
#include "topicgraph/labeling.hpp"
#include "topicgraph/sentiment.hpp"
#include "topicgraph/topics.hpp"

namespace topicgraph {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);
json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const json& j);

json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const json& j);

// Checkpoint: {"format", "shape": {"topics", "dim"}, "seed", "config",
// "tensors": {"topics", "projection", "bias", "attention"}, "loss_history"}.
json checkpoint_to_json(const ModelParams& p, const TrainConfig& config,
                        const std::vector<double>& loss_history = {});
ModelParams checkpoint_from_json(const json& j, TrainConfig* config = nullptr,
                                 std::vector<double>* loss_history = nullptr);

json to_json(const Corpus& c);
Corpus corpus_from_json(const json& j);

json to_json(const CorrelationMatrix& c);
CorrelationMatrix correlation_from_json(const json& j);

json to_json(const TopicSummary& s);
TopicSummary summary_from_json(const json& j);

json to_json(const SharedHypernymTally& t);
SharedHypernymTally tally_from_json(const json& j);

json to_json(const TopicSentiment& t);
TopicSentiment topic_sentiment_from_json(const json& j);

json to_json(const Dendrogram& d);
Dendrogram dendrogram_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_text_file(const std::filesystem::path& path, const std::string& contents);
void write_json_file(const std::filesystem::path& path, const json& doc, int indent = -1);

}  // namespace topicgraph
