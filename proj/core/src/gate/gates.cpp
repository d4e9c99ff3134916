#include "sparkle/gate/gates.hpp"

#include "sparkle/error.hpp"
#include "sparkle/media/sampling.hpp"

namespace sparkle::gate {

std::string to_string(GateRule rule) {
  switch (rule) {
    case GateRule::Source2Fps: return "source-2fps";
    case GateRule::FirstFrame: return "first-frame";
    case GateRule::Removal: return "removal";
    case GateRule::Final4Frame: return "final-4frame";
  }
  return "unknown";
}

GateRule parse_gate_rule(const std::string& name) {
  for (auto r : {GateRule::Source2Fps, GateRule::FirstFrame, GateRule::Removal, GateRule::Final4Frame}) {
    if (to_string(r) == name) return r;
  }
  throw ValidationError("unknown gate rule '" + name + "'");
}

double GateThresholds::for_rule(GateRule rule) const {
  switch (rule) {
    case GateRule::Source2Fps: return source;
    case GateRule::FirstFrame: return first_frame;
    case GateRule::Removal: return removal;
    case GateRule::Final4Frame: return final_video;
  }
  return final_video;
}

nlohmann::json GateResult::to_json() const {
  auto scores = nlohmann::json::array();
  for (const auto& s : frame_scores) scores.push_back({{"frame_index", s.frame_index}, {"score", s.score}});
  return {{"rule", to_string(rule)},
          {"accepted", accepted},
          {"mean_score", mean_score},
          {"threshold", threshold},
          {"frame_scores", std::move(scores)}};
}

GateResult GateResult::from_json(const nlohmann::json& j) {
  try {
    GateResult r;
    r.rule = parse_gate_rule(j.at("rule"));
    r.accepted = j.at("accepted");
    r.mean_score = j.at("mean_score");
    r.threshold = j.at("threshold");
    for (const auto& s : j.at("frame_scores")) r.frame_scores.push_back({s.at("frame_index"), s.at("score")});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed gate result: ") + e.what());
  }
}

GateResult decide(GateRule rule, std::vector<FrameScore> scores, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 10.0)) throw ValidationError("gate threshold must lie in [0, 10]");
  if (scores.empty()) throw ValidationError("gate needs at least one frame score");
  double sum = 0.0;
  for (const auto& s : scores) {
    if (!(s.score >= 0.0 && s.score <= 10.0)) {
      throw ValidationError("score out of range at frame " + std::to_string(s.frame_index) + ": " +
                            std::to_string(s.score));
    }
    sum += s.score;
  }
  GateResult r;
  r.rule = rule;
  r.threshold = threshold;
  r.mean_score = sum / static_cast<double>(scores.size());
  r.accepted = r.mean_score >= threshold;
  r.frame_scores = std::move(scores);
  return r;
}

namespace {

GateResult score_pairs(GateRule rule, const media::VideoClip& src, const media::VideoClip& edited,
                       const media::FrameIndexList& indices, const std::string& prompt,
                       workers::EditScorer& scorer, const std::string& clip_id, double threshold) {
  std::vector<FrameScore> scores;
  scores.reserve(indices.size());
  for (std::size_t t : indices) {
    auto report = scorer.score_edit(src.frame(t), edited.frame(t), prompt, {clip_id, to_string(rule), t});
    scores.push_back({t, report.overall});
  }
  return decide(rule, std::move(scores), threshold);
}

}  // namespace

GateResult gate_source(const media::VideoClip& src, const media::VideoClip& edited, const std::string& prompt,
                       workers::EditScorer& scorer, const std::string& clip_id, double threshold) {
  if (src.size() != edited.size()) {
    throw ValidationError("gate_source needs frame-aligned clips (" + std::to_string(src.size()) + " vs " +
                          std::to_string(edited.size()) + " frames)");
  }
  return score_pairs(GateRule::Source2Fps, src, edited, media::sample_at_fps(src, {2, 1}), prompt, scorer, clip_id,
                     threshold);
}

GateResult gate_first_frame(const media::Frame& before, const media::Frame& after, const std::string& prompt,
                            workers::EditScorer& scorer, const std::string& clip_id, GateRule rule,
                            double threshold) {
  if (rule != GateRule::FirstFrame && rule != GateRule::Removal) {
    throw ValidationError("gate_first_frame takes rule first-frame or removal");
  }
  if (!(threshold >= 0.0 && threshold <= 10.0)) throw ValidationError("gate threshold must lie in [0, 10]");
  auto report = scorer.score_edit(before, after, prompt, {clip_id, to_string(rule), 0});
  return decide(rule, {{0, report.overall}}, threshold);
}

GateResult gate_final_video(const media::VideoClip& src, const media::VideoClip& edited, const std::string& prompt,
                            workers::EditScorer& scorer, const std::string& clip_id, double threshold) {
  if (edited.size() < 2) throw ValidationError("final gate needs at least 2 frames");
  if (src.size() < edited.size()) throw ValidationError("source shorter than edited video");
  return score_pairs(GateRule::Final4Frame, src, edited, media::uniform_sample_excluding_first(edited.size(), 4),
                     prompt, scorer, clip_id, threshold);
}

}  // namespace sparkle::gate
