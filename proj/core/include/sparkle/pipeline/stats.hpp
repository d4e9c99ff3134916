#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sparkle/pipeline/manifest.hpp"

namespace sparkle::pipeline {

struct StatsReport {
  std::size_t total = 0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t failed = 0;
  std::size_t pending = 0;
  std::array<std::size_t, kStageCount> entered{};   // stage attempted (done, rejected or failed)
  std::array<std::size_t, kStageCount> passed{};
  std::array<std::size_t, kStageCount> rejected_at{};
  std::array<std::size_t, kStageCount> failed_at{};
  /// Accepted records by theme, subtheme, scene.
  std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> counts;

  /// passed / entered for a stage (1-based); 0 when nothing entered.
  double yield(int stage) const;
  nlohmann::json to_json() const;
};

StatsReport compute_stats(const std::vector<ManifestRecord>& records);
StatsReport compute_stats(const std::filesystem::path& manifest);

struct ThemeRow {
  std::string theme;  // "Total" for the summary row
  std::size_t subthemes = 0;
  std::size_t scenes = 0;
  std::optional<std::size_t> videos_per_scene;  // set when every scene holds the same count
  std::size_t videos = 0;
};

/// One row per theme plus a trailing Total row.
std::vector<ThemeRow> theme_rows(const StatsReport& stats);

/// Markdown table with columns Theme, Subtheme, Scene, Vid / Scene, Videos,
/// followed by per-stage rejection and yield lines.
std::string render_stats(const StatsReport& stats);

}  // namespace sparkle::pipeline
