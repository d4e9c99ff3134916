#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "sparkle/gate/gates.hpp"
#include "sparkle/guidance/canny.hpp"
#include "sparkle/motion/classifier.hpp"
#include "sparkle/workers/client.hpp"
#include "sparkle/workers/transport.hpp"

namespace sparkle::pipeline {

struct WorkerConfig {
  std::string mode = "mock";  // mock | http
  std::filesystem::path fixture;
  std::string url;                            // default endpoint for every role
  std::map<std::string, std::string> role_urls;  // per-role override, keyed by role name
  double timeout_s = 60.0;
  int max_retries = 2;
  double backoff_base_s = 0.5;
  double backoff_factor = 2.0;
  int max_in_flight = 4;
};

struct PipelineConfig {
  int concurrency = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path artifact_dir = "artifacts";
  bool vlm_motion_check = false;
  bool source_gate = true;  // applies to records with reference_edit_path

  WorkerConfig workers;
  gate::GateThresholds thresholds;
  motion::MotionParams motion;
  guidance::CannyParams canny;
  int mask_dilation = 0;

  /// Throws ValidationError on thresholds outside [0, 10], concurrency < 1,
  /// bad worker settings, or unusable motion/Canny parameters.
  void validate() const;
};

/// INI file with sections [pipeline] [workers] [gates] [motion] [guidance].
/// Unknown keys are rejected. Relative paths resolve against the file's
/// directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Worker client built from the config; `mock` is set in mock mode so
/// callers can read call counters.
struct WorkerSet {
  std::shared_ptr<workers::WorkerClient> client;
  std::shared_ptr<workers::ScriptedTransport> mock;
};

/// HTTP mode reads the bearer token from SPARKLE_WORKER_TOKEN.
WorkerSet make_workers(const WorkerConfig& config);

}  // namespace sparkle::pipeline
