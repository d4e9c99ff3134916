#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace sparkle::workers {

enum class Role { Grounder, Editor, Animator, Tracker, Scorer, Vlm, Judge };

/// POST route of each role: /ground /edit /animate /track /score /describe /judge.
std::string route_for(Role role);
std::string to_string(Role role);
Role parse_role(const std::string& name);

struct BoundingBox {
  std::string label;
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  std::size_t frame_index = 0;

  /// 0 <= x0 < x1 <= width and 0 <= y0 < y1 <= height.
  bool valid_for(int width, int height) const {
    return 0 <= x0 && x0 < x1 && x1 <= width && 0 <= y0 && y0 < y1 && y1 <= height;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct ScoreReport {
  double overall = 0.0;
  std::map<std::string, double> sub_scores;
};

enum class TrackDirection { Forward, Backward };
std::string to_string(TrackDirection direction);

}  // namespace sparkle::workers
