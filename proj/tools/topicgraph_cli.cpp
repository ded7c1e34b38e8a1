#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include "topicgraph/pipeline.hpp"
#include "topicgraph/serialize.hpp"

namespace fs = std::filesystem;
using namespace topicgraph;

namespace {

const std::set<std::string> kPathKeys = {"corpus",    "nb_training", "embeddings", "taxonomy",
                                         "lexicon",   "boosters",    "negations",  "labels",
                                         "output",    "cache_dir",   "sweep_report"};

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;  // config key -> raw flag text
  std::vector<std::string> sets;              // key=value
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("-c,--config", flags.config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  for (const auto& key : config_keys()) {
    if (key == "cache_dir") continue;  // handled by --cache-dir with env precedence
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    cmd->add_option(flag, flags.values[key], "override config key '" + key + "'");
  }
  cmd->add_option("--set", flags.sets, "override any config key, key=value (value parsed as JSON)");
}

Config build_config(const ConfigFlags& flags) {
  json doc = read_json_file(flags.config_path);
  auto put = [&](const std::string& key, const std::string& raw) {
    if (kPathKeys.count(key) && !raw.empty() && raw != "null" && raw.front() != '[')
      doc[key] = fs::absolute(raw).string();
    else
      apply_override(doc, key, raw);
  };
  for (const auto& [key, raw] : flags.values)
    if (!raw.empty()) put(key, raw);
  for (const auto& kv : flags.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
    put(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config_from_json(doc, fs::absolute(flags.config_path).parent_path());
}

void copy_tree(const fs::path& from, const fs::path& to) {
  if (!fs::is_directory(from)) throw Error("UI asset directory not found: " + from.string());
  fs::create_directories(to);
  fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topicgraph: correlated topic graphs from raw text"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  std::optional<std::string> cache_dir;
  bool no_cache = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run the full pipeline and write a graph bundle");
  add_config_flags(run, run_flags);
  run->add_option("--cache-dir", cache_dir, "stage cache directory (overrides $TOPICGRAPH_CACHE_DIR)");
  run->add_flag("--no-cache", no_cache, "recompute every stage");
  run->add_flag("-q,--quiet", quiet, "no per-stage progress");

  ConfigFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid search over topics and vocabulary size by ANH");
  add_config_flags(sweep_cmd, sweep_flags);

  std::string bundle_in, labels_in, export_out;
  auto* export_cmd = app.add_subcommand("export", "apply a label file to a bundle");
  export_cmd->add_option("--bundle", bundle_in, "graph bundle JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--labels", labels_in, "label override JSON")->check(CLI::ExistingFile);
  export_cmd->add_option("-o,--out", export_out, "output bundle path")->required();

  std::string serve_bundle, serve_assets, serve_out;
  auto* serve = app.add_subcommand("serve-static", "copy UI assets and a bundle into one directory");
  serve->add_option("--bundle", serve_bundle, "graph bundle JSON")->required()->check(CLI::ExistingFile);
  serve->add_option("--assets", serve_assets, "built UI asset directory")->required();
  serve->add_option("-o,--out", serve_out, "destination directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const Config config = build_config(run_flags);
      RunOptions options;
      if (cache_dir) options.cache_dir = fs::path(*cache_dir);
      options.use_cache = !no_cache;
      if (!quiet) options.log = &std::cerr;
      const auto result = run_pipeline(config, options);
      std::size_t cached = 0;
      for (const auto& s : result.stages) cached += s.cached;
      std::cout << "bundle: " << result.bundle_path.string() << "\n"
                << "topics: " << result.bundle.nodes.size() << "\n"
                << "stages cached: " << cached << "/" << result.stages.size() << "\n";
      if (result.fully_cached()) std::cout << "all stages cached\n";
    } else if (*sweep_cmd) {
      const Config config = build_config(sweep_flags);
      const auto report = run_sweep(config);
      write_json_file(config.sweep_report, report.to_json(), 2);
      std::cout << std::left << std::setw(8) << "topics" << std::setw(12) << "vocab" << std::setw(12) << "ANH"
                << std::setw(12) << "CS"
                << "status\n";
      for (const auto& p : report.points) {
        std::cout << std::setw(8) << p.point.topics << std::setw(12) << p.point.vocab_size << std::setw(12)
                  << (p.ok() ? std::to_string(p.anh) : "-") << std::setw(12)
                  << (p.coherence ? std::to_string(*p.coherence) : "-") << p.status << "\n";
      }
      const auto& best = report.chosen();
      std::cout << "best: topics=" << best.point.topics << " vocab=" << best.point.vocab_size
                << " anh=" << best.anh << "\nreport: " << config.sweep_report.string() << "\n";
    } else if (*export_cmd) {
      std::optional<fs::path> labels;
      if (!labels_in.empty()) labels = labels_in;
      const auto b = export_with_labels(bundle_in, labels, export_out);
      std::cout << "bundle: " << export_out << " (" << b.nodes.size() << " topics)\n";
    } else if (*serve) {
      // Validate before copying so a broken bundle never reaches the UI.
      const auto b = bundle_from_json(read_json_file(serve_bundle));
      copy_tree(serve_assets, serve_out);
      write_json_file(fs::path(serve_out) / "bundle.json", to_json(b), 2);
      std::cout << "static site: " << serve_out << "\n";
    }
  } catch (const StageError& e) {
    std::cerr << "error in stage " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
