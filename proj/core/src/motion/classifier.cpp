#include "sparkle/motion/classifier.hpp"

#include "sparkle/media/sampling.hpp"

namespace sparkle::motion {

bool classify_pair_motion(const HomographyFit& fit, double mean_magnitude, double r_min, double m_min) {
  return fit.inlier_ratio >= r_min && mean_magnitude >= m_min;
}

std::uint64_t pair_seed(std::uint64_t seed, std::size_t pair_index) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (pair_index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

MotionVerdict classify_clip_static(const media::VideoClip& clip, const MotionParams& params, std::uint64_t seed) {
  MotionVerdict verdict;
  auto samples = media::sample_at_fps(clip, params.sample_fps);
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    FlowField flow = compute_flow(clip.frame(samples[i]), clip.frame(samples[i + 1]), params.flow);
    HomographyFit fit = estimate_homography_ransac(flow, params.ransac, pair_seed(seed, i));
    PairMotion pair;
    pair.from_index = samples[i];
    pair.to_index = samples[i + 1];
    pair.inlier_ratio = fit.inlier_ratio;
    pair.mean_magnitude = mean_motion_magnitude(flow);
    pair.moving = classify_pair_motion(fit, pair.mean_magnitude, params.r_min, params.m_min);
    verdict.pairs.push_back(pair);
  }
  verdict.clip_static = true;
  for (const auto& p : verdict.pairs) verdict.clip_static = verdict.clip_static && !p.moving;
  return verdict;
}

}  // namespace sparkle::motion
