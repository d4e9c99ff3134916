#pragma once

#include <filesystem>

#include "sparkle/pipeline/config.hpp"
#include "sparkle/pipeline/manifest.hpp"
#include "sparkle/workers/roles.hpp"

namespace sparkle::pipeline {

/// The worker roles a stage may call.
struct StageRoles {
  workers::Grounder& grounder;
  workers::ImageEditor& editor;
  workers::BackgroundAnimator& animator;
  workers::MaskTracker& tracker;
  workers::EditScorer& scorer;
  workers::VisionLanguage& vlm;

  static StageRoles from(workers::WorkerClient& client);
};

struct StageContext {
  const PipelineConfig& config;
  StageRoles roles;
  std::filesystem::path manifest_dir;  // base for relative source paths
};

/// Runs one stage and returns the updated record:
///   1 static-camera filter (+ optional VLM check, + source gate when a
///     reference edit is present)
///   2 first-frame edit, gate 8
///   3 foreground labels, removal edits with gate 8.5, background caption,
///     background animation
///   4 BAIT foreground masks
///   5 guidance composition, controlled generation, final 4-frame gate
/// Gate misses mark the stage rejected; errors mark it failed and leave the
/// rest of the record as it was. A stage that is already done is returned
/// unchanged. Throws ValidationError if an earlier stage is not done.
ManifestRecord run_stage(const ManifestRecord& record, int stage, const StageContext& ctx);

}  // namespace sparkle::pipeline
