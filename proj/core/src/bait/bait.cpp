#include "sparkle/bait/bait.hpp"

#include <future>

#include "sparkle/error.hpp"
#include "sparkle/media/png.hpp"
#include "sparkle/media/sampling.hpp"

namespace sparkle::bait {

AnchorSet collect_anchors(const media::VideoClip& clip, const std::vector<std::string>& labels,
                          workers::Grounder& grounder, const std::string& clip_id, media::Rational sample_fps) {
  if (labels.empty()) throw ValidationError("no foreground labels to ground");
  AnchorSet set;
  const auto sampled = media::sample_at_fps(clip, sample_fps);
  set.n_sampled_frames = sampled.size();
  for (std::size_t t : sampled) {
    auto boxes = grounder.ground(clip.frame(t), t, labels, clip_id);
    if (!boxes.empty()) set.anchors.push_back({t, std::move(boxes)});
  }
  if (set.anchors.empty()) throw ValidationError("foreground never detected");
  return set;
}

MaskVideo track_from_anchor(const media::VideoClip& clip, const AnchorFrame& anchor, workers::MaskTracker& tracker,
                            const std::string& clip_id) {
  if (anchor.frame_index >= clip.size()) throw ValidationError("anchor frame outside clip");
  MaskVideo pass(clip.width(), clip.height(), clip.size());
  for (const auto& box : anchor.boxes) {
    for (auto dir : {workers::TrackDirection::Forward, workers::TrackDirection::Backward}) {
      pass = union_of(pass, tracker.propagate_mask(clip, box, dir, clip_id));
    }
  }
  return pass;
}

MaskVideo vote_masks(const std::vector<MaskVideo>& passes) {
  if (passes.empty()) throw ValidationError("vote_masks needs at least one pass");
  const auto& first = passes.front();
  for (const auto& p : passes) {
    if (!p.same_shape(first)) throw ValidationError("vote_masks: passes differ in frame count or dimensions");
  }
  const std::size_t n = passes.size();
  const std::size_t pixels = static_cast<std::size_t>(first.width()) * first.height();
  std::vector<BinaryMask> out;
  out.reserve(first.size());
  std::vector<std::uint16_t> votes(pixels);
  for (std::size_t t = 0; t < first.size(); ++t) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const auto& p : passes) {
      const auto& bits = p[t].bits();
      for (std::size_t i = 0; i < pixels; ++i) votes[i] += bits[i];
    }
    std::vector<std::uint8_t> bits(pixels);
    for (std::size_t i = 0; i < pixels; ++i) bits[i] = 2u * votes[i] > n ? 1 : 0;
    out.emplace_back(first.width(), first.height(), std::move(bits));
  }
  return MaskVideo(first.width(), first.height(), std::move(out));
}

double disagreement_rate(const MaskVideo& pass, const MaskVideo& consensus) {
  if (!pass.same_shape(consensus)) throw ValidationError("disagreement_rate: shape mismatch");
  std::size_t differ = 0;
  std::size_t total = 0;
  for (std::size_t t = 0; t < pass.size(); ++t) {
    const auto& a = pass[t].bits();
    const auto& b = consensus[t].bits();
    for (std::size_t i = 0; i < a.size(); ++i) differ += a[i] != b[i];
    total += a.size();
  }
  return total == 0 ? 0.0 : static_cast<double>(differ) / static_cast<double>(total);
}

nlohmann::json BaitResult::diagnostics() const {
  return {{"n_anchors", n_anchors},
          {"n_sampled_frames", n_sampled_frames},
          {"anchor_frames", anchor_frames},
          {"per_pass_disagreement", per_pass_disagreement},
          {"undetected_sampled_frames", n_sampled_frames - n_anchors}};
}

BaitResult run_bait(const media::VideoClip& clip, const std::vector<std::string>& labels,
                    workers::Grounder& grounder, workers::MaskTracker& tracker, const std::string& clip_id,
                    bool concurrent) {
  AnchorSet set = collect_anchors(clip, labels, grounder, clip_id);
  std::vector<MaskVideo> passes;
  passes.reserve(set.anchors.size());
  if (concurrent && set.anchors.size() > 1) {
    std::vector<std::future<MaskVideo>> pending;
    for (const auto& anchor : set.anchors) {
      pending.push_back(std::async(std::launch::async, [&, anchor] {
        return track_from_anchor(clip, anchor, tracker, clip_id);
      }));
    }
    for (auto& f : pending) passes.push_back(f.get());
  } else {
    for (const auto& anchor : set.anchors) passes.push_back(track_from_anchor(clip, anchor, tracker, clip_id));
  }

  BaitResult result{vote_masks(passes), set.n_anchors(), set.n_sampled_frames, {}, {}};
  for (const auto& a : set.anchors) result.anchor_frames.push_back(a.frame_index);
  for (const auto& p : passes) result.per_pass_disagreement.push_back(disagreement_rate(p, result.consensus));
  return result;
}

void write_bait_result(const BaitResult& result, const std::filesystem::path& dir) {
  write_mask_video(result.consensus, dir);
  const std::string text = result.diagnostics().dump(2) + "\n";
  media::write_file_bytes(dir / "diagnostics.json", std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace sparkle::bait
