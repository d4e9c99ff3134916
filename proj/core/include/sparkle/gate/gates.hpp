#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "sparkle/media/frame.hpp"
#include "sparkle/workers/roles.hpp"

namespace sparkle::gate {

enum class GateRule { Source2Fps, FirstFrame, Removal, Final4Frame };

/// "source-2fps", "first-frame", "removal", "final-4frame".
std::string to_string(GateRule rule);
GateRule parse_gate_rule(const std::string& name);

struct GateThresholds {
  double source = 8.0;
  double first_frame = 8.0;
  double removal = 8.5;
  double final_video = 8.0;

  double for_rule(GateRule rule) const;
};

struct FrameScore {
  std::size_t frame_index = 0;
  double score = 0.0;
  friend bool operator==(const FrameScore&, const FrameScore&) = default;
};

struct GateResult {
  bool accepted = false;
  double mean_score = 0.0;
  std::vector<FrameScore> frame_scores;
  double threshold = 0.0;
  GateRule rule = GateRule::FirstFrame;

  nlohmann::json to_json() const;
  static GateResult from_json(const nlohmann::json& j);
};

/// Verdict from already collected scores: accepted iff mean >= threshold.
/// Throws ValidationError on an empty list or a score outside [0, 10].
GateResult decide(GateRule rule, std::vector<FrameScore> scores, double threshold);

/// Index-matched (source, edited) pairs at 2 FPS; threshold 8 by default.
GateResult gate_source(const media::VideoClip& src, const media::VideoClip& edited, const std::string& prompt,
                       workers::EditScorer& scorer, const std::string& clip_id, double threshold = 8.0);

/// Single score. Use rule FirstFrame (8.0) for the stage-2 edit and Removal
/// (8.5) for the stage-3 foreground removal.
GateResult gate_first_frame(const media::Frame& before, const media::Frame& after, const std::string& prompt,
                            workers::EditScorer& scorer, const std::string& clip_id, GateRule rule,
                            double threshold);

/// Four frames spread over (0, n-1], never frame 0; threshold 8 by default.
GateResult gate_final_video(const media::VideoClip& src, const media::VideoClip& edited, const std::string& prompt,
                            workers::EditScorer& scorer, const std::string& clip_id, double threshold = 8.0);

}  // namespace sparkle::gate
