#include "sparkle/pipeline/stats.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace sparkle::pipeline {

double StatsReport::yield(int stage) const {
  const auto i = static_cast<std::size_t>(stage - 1);
  return entered.at(i) == 0 ? 0.0 : static_cast<double>(passed[i]) / static_cast<double>(entered[i]);
}

nlohmann::json StatsReport::to_json() const {
  auto stages = nlohmann::json::array();
  for (int k = 1; k <= kStageCount; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    stages.push_back({{"stage", k},
                      {"entered", entered[i]},
                      {"passed", passed[i]},
                      {"rejected", rejected_at[i]},
                      {"failed", failed_at[i]},
                      {"yield", yield(k)}});
  }
  return {{"total", total},     {"accepted", accepted}, {"rejected", rejected}, {"failed", failed},
          {"pending", pending}, {"stages", stages},     {"counts", counts}};
}

StatsReport compute_stats(const std::vector<ManifestRecord>& records) {
  StatsReport s;
  s.total = records.size();
  for (const auto& r : records) {
    for (int k = 1; k <= kStageCount; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      switch (r.status(k)) {
        case StageStatus::Pending: break;
        case StageStatus::Done: ++s.entered[i]; ++s.passed[i]; break;
        case StageStatus::Rejected: ++s.entered[i]; ++s.rejected_at[i]; break;
        case StageStatus::Failed: ++s.entered[i]; ++s.failed_at[i]; break;
      }
    }
    if (r.accepted()) {
      ++s.accepted;
      ++s.counts[r.theme][r.subtheme][r.scene];
    } else if (r.rejected()) {
      ++s.rejected;
    } else if (r.failed()) {
      ++s.failed;
    } else {
      ++s.pending;
    }
  }
  return s;
}

StatsReport compute_stats(const std::filesystem::path& manifest) { return compute_stats(read_manifest(manifest)); }

std::vector<ThemeRow> theme_rows(const StatsReport& stats) {
  std::vector<ThemeRow> rows;
  ThemeRow total{"Total", 0, 0, std::nullopt, 0};
  std::set<std::size_t> all_per_scene;
  for (const auto& [theme, subthemes] : stats.counts) {
    ThemeRow row{theme, subthemes.size(), 0, std::nullopt, 0};
    std::set<std::size_t> per_scene;
    for (const auto& [sub, scenes] : subthemes) {
      row.scenes += scenes.size();
      for (const auto& [scene, n] : scenes) {
        row.videos += n;
        per_scene.insert(n);
      }
    }
    if (per_scene.size() == 1) row.videos_per_scene = *per_scene.begin();
    all_per_scene.insert(per_scene.begin(), per_scene.end());
    total.subthemes += row.subthemes;
    total.scenes += row.scenes;
    total.videos += row.videos;
    rows.push_back(row);
  }
  // Known themes first, in taxonomy order; anything else after, alphabetically.
  static const std::vector<std::string> kOrder{"Location", "Season", "Time", "Style"};
  auto rank = [](const std::string& theme) {
    auto it = std::find(kOrder.begin(), kOrder.end(), theme);
    return static_cast<std::size_t>(it - kOrder.begin());
  };
  std::stable_sort(rows.begin(), rows.end(),
                   [&](const ThemeRow& a, const ThemeRow& b) { return rank(a.theme) < rank(b.theme); });
  if (all_per_scene.size() == 1) total.videos_per_scene = *all_per_scene.begin();
  rows.push_back(total);
  return rows;
}

std::string render_stats(const StatsReport& stats) {
  std::ostringstream out;
  out << "| Theme | Subtheme | Scene | Vid / Scene | Videos |\n|---|---:|---:|---:|---:|\n";
  for (const auto& r : theme_rows(stats)) {
    out << "| " << r.theme << " | " << r.subthemes << " | " << r.scenes << " | "
        << (r.videos_per_scene ? std::to_string(*r.videos_per_scene) : "-") << " | " << r.videos << " |\n";
  }
  out << "\nrecords: " << stats.total << " total, " << stats.accepted << " accepted, " << stats.rejected
      << " rejected, " << stats.failed << " failed, " << stats.pending << " pending\n";
  out << std::fixed << std::setprecision(3);
  for (int k = 1; k <= kStageCount; ++k) {
    const auto i = static_cast<std::size_t>(k - 1);
    out << "stage " << k << ": entered " << stats.entered[i] << ", rejected " << stats.rejected_at[i] << ", failed "
        << stats.failed_at[i] << ", yield " << stats.yield(k) << "\n";
  }
  return out.str();
}

}  // namespace sparkle::pipeline
