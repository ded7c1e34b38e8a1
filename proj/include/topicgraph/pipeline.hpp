#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "topicgraph/bundle.hpp"
#include "topicgraph/config.hpp"
#include "topicgraph/sweep.hpp"

namespace topicgraph {

inline constexpr std::array<const char*, 12> kStages = {
    "ingest", "vocab",     "embeddings", "init",      "train",   "assign",
    "correlate", "summarize", "label",   "sentiment", "cluster", "export"};

inline constexpr const char* kCacheDirEnv = "TOPICGRAPH_CACHE_DIR";

// Error raised inside a pipeline stage; what() reads "<stage>: <cause>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause)
      : Error(stage + ": " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct StageReport {
  std::string stage;
  bool cached = false;
  std::string key;
  double seconds = 0.0;
};

struct RunOptions {
  std::optional<std::filesystem::path> cache_dir;  // wins over env and config
  bool use_cache = true;
  std::ostream* log = nullptr;  // one line per finished stage
};

struct RunResult {
  GraphBundle bundle;
  std::vector<StageReport> stages;
  std::filesystem::path bundle_path;
  std::filesystem::path cache_dir;

  bool fully_cached() const;
};

// Flag, then TOPICGRAPH_CACHE_DIR, then the config key, then
// `.topicgraph-cache` next to the config.
std::filesystem::path resolve_cache_dir(const Config& config,
                                        const std::optional<std::filesystem::path>& flag);

// Runs every stage in order. A stage whose key matches a cached artifact is
// loaded instead of recomputed; keys chain the upstream key with the stage's
// own config fields and input file contents.
RunResult run_pipeline(const Config& config, const RunOptions& options = {});

// Hyperparameter sweep over sweep_topics x sweep_vocab_sizes using the
// config's corpus, embeddings and taxonomy.
AnhReport run_sweep(const Config& config);

// Reads a bundle, applies a label override file, validates and writes it.
GraphBundle export_with_labels(const std::filesystem::path& bundle,
                               const std::optional<std::filesystem::path>& labels,
                               const std::filesystem::path& out);

}  // namespace topicgraph
