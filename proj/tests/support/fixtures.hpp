#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparkle/pipeline/config.hpp"
#include "sparkle/pipeline/manifest.hpp"
#include "sparkle/workers/transport.hpp"

namespace sparkle::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Four scripted clips written under a directory:
///   clip-static-a  static camera, passes every gate
///   clip-pan       global translation, rejected at stage 1
///   clip-weak-edit static, first-frame score 7.9, rejected at stage 2
///   clip-static-b  static, two foreground labels, one dropout and one blob
///                  in its tracking passes, passes every gate
struct PipelineScenario {
  std::filesystem::path manifest;
  std::filesystem::path fixture;
  std::filesystem::path config_file;
  pipeline::PipelineConfig config;
  workers::Json fixture_json;
};

PipelineScenario write_pipeline_scenario(const std::filesystem::path& dir, int concurrency = 1);

/// Whole file as bytes.
std::string read_text(const std::filesystem::path& path);

}  // namespace sparkle::testing

namespace sparkle::testing {

/// n integer score rows (dimension 0 first) whose column means are exactly
/// `means` (each a multiple of 1/n) and whose other columns never exceed column 0.
std::vector<std::vector<int>> score_rows_with_means(const std::vector<double>& means, int n);

/// A judge reply in the example response format for the given dimension names.
std::string judge_reply(const std::vector<std::string>& names, const std::vector<int>& scores,
                        const std::string& reasoning = "Looks fine.");

}  // namespace sparkle::testing
