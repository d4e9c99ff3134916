#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "sparkle/bait/mask.hpp"
#include "sparkle/media/frame.hpp"
#include "sparkle/workers/roles.hpp"

namespace sparkle::bait {

/// Boxes grounded on one sampled frame.
struct AnchorFrame {
  std::size_t frame_index = 0;
  std::vector<workers::BoundingBox> boxes;
};

struct AnchorSet {
  std::vector<AnchorFrame> anchors;
  std::size_t n_sampled_frames = 0;

  /// N: anchor frames with at least one box.
  std::size_t n_anchors() const { return anchors.size(); }
};

/// Grounds every 2 FPS sample; frames with no boxes are dropped. Throws
/// ValidationError "foreground never detected" when nothing is retained.
AnchorSet collect_anchors(const media::VideoClip& clip, const std::vector<std::string>& labels,
                          workers::Grounder& grounder, const std::string& clip_id,
                          media::Rational sample_fps = {2, 1});

/// Forward and backward passes from every box on the anchor frame, unioned
/// into one full-length pass.
MaskVideo track_from_anchor(const media::VideoClip& clip, const AnchorFrame& anchor, workers::MaskTracker& tracker,
                            const std::string& clip_id);

/// Foreground iff strictly more than half of the passes mark the pixel.
MaskVideo vote_masks(const std::vector<MaskVideo>& passes);

/// Fraction of pixels (over all frames) where `pass` disagrees with `consensus`.
double disagreement_rate(const MaskVideo& pass, const MaskVideo& consensus);

struct BaitResult {
  MaskVideo consensus;
  std::size_t n_anchors = 0;
  std::size_t n_sampled_frames = 0;
  std::vector<std::size_t> anchor_frames;
  std::vector<double> per_pass_disagreement;

  nlohmann::json diagnostics() const;
};

/// collect_anchors, one pass per anchor frame (run concurrently when
/// `concurrent`), then vote.
BaitResult run_bait(const media::VideoClip& clip, const std::vector<std::string>& labels,
                    workers::Grounder& grounder, workers::MaskTracker& tracker, const std::string& clip_id,
                    bool concurrent = true);

/// Consensus masks as a 1-bit png-dir plus diagnostics.json inside `dir`.
void write_bait_result(const BaitResult& result, const std::filesystem::path& dir);

}  // namespace sparkle::bait
