#pragma once

#include <cstdint>
#include <vector>

#include "sparkle/media/frame.hpp"
#include "sparkle/motion/flow.hpp"
#include "sparkle/motion/homography.hpp"

namespace sparkle::motion {

struct MotionParams {
  FlowParams flow;
  RansacParams ransac;
  double r_min = 0.5;
  double m_min = 1.0;
  media::Rational sample_fps{2, 1};
};

struct PairMotion {
  std::size_t from_index = 0;
  std::size_t to_index = 0;
  double inlier_ratio = 0.0;
  double mean_magnitude = 0.0;
  bool moving = false;
};

struct MotionVerdict {
  std::vector<PairMotion> pairs;
  bool clip_static = true;
};

/// Camera movement between two frames: a global homography explains at least
/// r_min of the flow AND the mean flow magnitude is at least m_min pixels.
bool classify_pair_motion(const HomographyFit& fit, double mean_magnitude, double r_min = 0.5,
                          double m_min = 1.0);

/// Per-pair RANSAC seed derived from the clip seed.
std::uint64_t pair_seed(std::uint64_t seed, std::size_t pair_index);

/// Evaluates each consecutive pair of the sampled frames. The clip is static
/// only if no pair shows camera movement; one sampled frame means static.
MotionVerdict classify_clip_static(const media::VideoClip& clip, const MotionParams& params,
                                   std::uint64_t seed = 0);

}  // namespace sparkle::motion
