#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparkle/bait/mask.hpp"
#include "sparkle/media/frame.hpp"
#include "sparkle/workers/types.hpp"

namespace sparkle::workers {

// Role interfaces for the external foundation models. The pipeline only talks
// to these; WorkerClient implements all of them over a Transport.

class Grounder {
 public:
  virtual ~Grounder() = default;
  /// Boxes for the requested labels on one frame, tagged with frame_index.
  virtual std::vector<BoundingBox> ground(const media::Frame& frame, std::size_t frame_index,
                                          const std::vector<std::string>& labels, const std::string& clip_id) = 0;
};

class ImageEditor {
 public:
  virtual ~ImageEditor() = default;
  virtual media::Frame edit_image(const media::Frame& frame, const std::string& instruction,
                                  const std::string& clip_id, std::uint64_t seed) = 0;
};

class BackgroundAnimator {
 public:
  virtual ~BackgroundAnimator() = default;
  /// Image-to-video. Frame 0 of the result is the input frame.
  virtual media::VideoClip animate_background(const media::Frame& frame, const std::string& caption,
                                              std::size_t n_frames, media::Rational fps,
                                              const std::string& clip_id, std::uint64_t seed) = 0;
  /// Edge-controlled generation conditioned on a first frame; one output frame
  /// per guidance frame.
  virtual media::VideoClip generate_controlled(const media::Frame& first_frame, const media::VideoClip& guidance,
                                               const std::string& prompt, const std::string& clip_id,
                                               std::uint64_t seed) = 0;
};

class MaskTracker {
 public:
  virtual ~MaskTracker() = default;
  /// Full-length mask video; frames on the untracked side of the anchor are empty.
  virtual bait::MaskVideo propagate_mask(const media::VideoClip& clip, const BoundingBox& anchor,
                                         TrackDirection direction, const std::string& clip_id) = 0;
};

/// Identifies one scoring call: which clip, which gate, which frame.
struct ScoreKey {
  std::string clip_id;
  std::string tag;
  std::size_t frame_index = 0;
};

class EditScorer {
 public:
  virtual ~EditScorer() = default;
  virtual ScoreReport score_edit(const media::Frame& before, const media::Frame& after, const std::string& prompt,
                                 const ScoreKey& key) = 0;
};

class VisionLanguage {
 public:
  virtual ~VisionLanguage() = default;
  /// Foreground entities to preserve, from the source and edited first frames.
  virtual std::vector<std::string> identify_foreground(const media::Frame& source_first,
                                                       const media::Frame& edited_first,
                                                       const std::string& clip_id) = 0;
  /// Target background description extracted from an editing prompt.
  virtual std::string extract_background_caption(const std::string& edit_prompt, const std::string& clip_id) = 0;
  /// Fine-grained check for residual camera movement.
  virtual bool detect_camera_motion(const media::VideoClip& clip, const std::string& clip_id) = 0;
};

class Judge {
 public:
  virtual ~Judge() = default;
  /// Raw judge response text for one video pair.
  virtual std::string judge(const std::string& prompt, const std::string& video_id, const std::string& source_path,
                            const std::string& edited_path) = 0;
};

}  // namespace sparkle::workers
