#pragma once

#include <memory>

#include "sparkle/workers/roles.hpp"
#include "sparkle/workers/transport.hpp"

namespace sparkle::workers {

/// Transport per role; roles may share one transport.
struct WorkerRoutes {
  std::shared_ptr<Transport> grounder;
  std::shared_ptr<Transport> editor;
  std::shared_ptr<Transport> animator;
  std::shared_ptr<Transport> tracker;
  std::shared_ptr<Transport> scorer;
  std::shared_ptr<Transport> vlm;
  std::shared_ptr<Transport> judge;

  static WorkerRoutes all(std::shared_ptr<Transport> transport);
};

/// Deterministic request ids; mock fixtures are keyed by these.
namespace request_id {
std::string ground(const std::string& clip_id, std::size_t frame_index);
std::string edit(const std::string& clip_id, const std::string& instruction);
std::string animate(const std::string& clip_id, const std::string& caption);
std::string generate(const std::string& clip_id);
std::string track(const std::string& clip_id, const BoundingBox& anchor, TrackDirection direction);
std::string score(const ScoreKey& key);
std::string describe(const std::string& clip_id, const std::string& task);
std::string judge(const std::string& video_id);
}  // namespace request_id

/// Client side of every worker role. Builds envelopes, validates responses at
/// the boundary (box geometry, frame counts, dimensions, score ranges), and
/// binarizes soft masks at 0.5.
class WorkerClient final : public Grounder,
                           public ImageEditor,
                           public BackgroundAnimator,
                           public MaskTracker,
                           public EditScorer,
                           public VisionLanguage,
                           public Judge {
 public:
  explicit WorkerClient(WorkerRoutes routes);

  std::vector<BoundingBox> ground(const media::Frame& frame, std::size_t frame_index,
                                  const std::vector<std::string>& labels, const std::string& clip_id) override;
  media::Frame edit_image(const media::Frame& frame, const std::string& instruction, const std::string& clip_id,
                          std::uint64_t seed) override;
  media::VideoClip animate_background(const media::Frame& frame, const std::string& caption, std::size_t n_frames,
                                      media::Rational fps, const std::string& clip_id, std::uint64_t seed) override;
  media::VideoClip generate_controlled(const media::Frame& first_frame, const media::VideoClip& guidance,
                                       const std::string& prompt, const std::string& clip_id,
                                       std::uint64_t seed) override;
  bait::MaskVideo propagate_mask(const media::VideoClip& clip, const BoundingBox& anchor, TrackDirection direction,
                                 const std::string& clip_id) override;
  ScoreReport score_edit(const media::Frame& before, const media::Frame& after, const std::string& prompt,
                         const ScoreKey& key) override;
  std::vector<std::string> identify_foreground(const media::Frame& source_first, const media::Frame& edited_first,
                                               const std::string& clip_id) override;
  std::string extract_background_caption(const std::string& edit_prompt, const std::string& clip_id) override;
  bool detect_camera_motion(const media::VideoClip& clip, const std::string& clip_id) override;
  std::string judge(const std::string& prompt, const std::string& video_id, const std::string& source_path,
                    const std::string& edited_path) override;

 private:
  Json call(const std::shared_ptr<Transport>& transport, Role role, const std::string& id, Json payload);

  WorkerRoutes routes_;
};

}  // namespace sparkle::workers
