#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sparkle/gate/gates.hpp"

namespace sparkle::pipeline {

inline constexpr int kStageCount = 5;

enum class StageStatus { Pending, Done, Rejected, Failed };
std::string to_string(StageStatus status);
StageStatus parse_stage_status(const std::string& text);

struct Failure {
  int stage = 0;
  std::string reason;
  friend bool operator==(const Failure&, const Failure&) = default;
};

/// One source clip's journey through stages 1-5. Artifact paths are relative
/// to the run's artifact directory; source_path may be relative to the
/// manifest's directory.
struct ManifestRecord {
  std::string clip_id;
  std::string source_path;
  std::string source_format = "png-dir";
  std::string reference_edit_path;  // optional edited source for the source gate
  std::string theme;
  std::string subtheme;
  std::string scene;
  std::string edit_prompt;
  std::string background_caption;
  std::vector<std::string> foreground_labels;
  std::array<StageStatus, kStageCount> stage_status{};
  std::optional<Failure> failure;
  std::vector<gate::GateResult> gate_results;
  std::map<std::string, std::string> artifact_paths;
  std::map<std::string, std::uint64_t> seeds;  // keyed "1".."5"
  nlohmann::json diagnostics = nlohmann::json::object();

  StageStatus status(int stage) const { return stage_status.at(static_cast<std::size_t>(stage - 1)); }
  void set_status(int stage, StageStatus s) { stage_status.at(static_cast<std::size_t>(stage - 1)) = s; }

  bool accepted() const { return status(kStageCount) == StageStatus::Done; }
  bool rejected() const;
  bool failed() const;
  /// Accepted or rejected; failed records are retried on the next run.
  bool terminal() const { return accepted() || rejected(); }
  /// First stage not done, or 0 when all are done.
  int next_stage() const;

  /// Throws ValidationError when stage k is done but an earlier one is not,
  /// or a rejected/failed record lacks its failure.
  void check_invariants() const;

  nlohmann::json to_json() const;
  static ManifestRecord from_json(const nlohmann::json& j);
};

/// JSONL, one record per line. Blank lines are skipped.
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_manifest_atomic(const std::filesystem::path& path, const std::vector<ManifestRecord>& records);

/// hash(master_seed, clip_id, stage).
std::uint64_t stage_seed(std::uint64_t master_seed, const std::string& clip_id, int stage);

}  // namespace sparkle::pipeline
