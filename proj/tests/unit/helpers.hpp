#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "topicgraph/common.hpp"

namespace topicgraph::testing {

class TempDir {
 public:
  TempDir() {
    static std::size_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("topicgraph-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    auto p = path_ / name;
    std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path data_dir() { return TOPICGRAPH_DATA_DIR; }

}  // namespace topicgraph::testing
