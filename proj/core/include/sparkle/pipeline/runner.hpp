#pragma once

#include <filesystem>
#include <functional>
#include <utility>

#include "sparkle/pipeline/config.hpp"
#include "sparkle/pipeline/stages.hpp"
#include "sparkle/pipeline/stats.hpp"

namespace sparkle::pipeline {

struct RunOptions {
  int first_stage = 1;
  int last_stage = kStageCount;
  /// Called after each stage once the manifest is persisted. An exception
  /// thrown here stops the run and propagates (used to simulate a crash).
  std::function<void(const ManifestRecord&, int stage)> after_stage;
  /// Append timestamped stage transitions to <manifest>.log.
  bool write_log = true;
};

/// "2-5" or "3"; throws ValidationError outside 1..5 or when reversed.
std::pair<int, int> parse_stage_range(const std::string& text);

struct RunReport {
  std::size_t records_touched = 0;
  std::size_t stages_run = 0;
  StatsReport stats;
};

/// Advances every non-terminal record through the stage window with
/// `config.concurrency` records in flight. Records whose earlier stages are
/// not done are skipped; failed stages are retried. The manifest is rewritten
/// atomically after every stage.
RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineConfig& config, StageRoles roles,
                       const RunOptions& options = {});

/// Same, with workers built from config.workers.
RunReport run_pipeline(const std::filesystem::path& manifest, const PipelineConfig& config,
                       const RunOptions& options = {});

}  // namespace sparkle::pipeline
