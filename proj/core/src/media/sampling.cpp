#include "sparkle/media/sampling.hpp"

#include "sparkle/error.hpp"

namespace sparkle::media {

namespace {

// round_half_up(numer / denom) for non-negative operands.
std::size_t round_half_up(unsigned __int128 numer, unsigned __int128 denom) {
  return static_cast<std::size_t>((2 * numer + denom) / (2 * denom));
}

}  // namespace

FrameIndexList sample_at_fps(std::size_t frame_count, Rational fps, Rational target_fps) {
  if (target_fps.num <= 0 || target_fps.den <= 0) throw ValidationError("target fps must be positive");
  if (fps.num <= 0 || fps.den <= 0) throw ValidationError("clip fps must be positive");
  FrameIndexList out;
  if (frame_count == 0) return out;
  // index_k = k * (fps.num / fps.den) / (target.num / target.den)
  const unsigned __int128 step_num = static_cast<unsigned __int128>(fps.num) * target_fps.den;
  const unsigned __int128 step_den = static_cast<unsigned __int128>(fps.den) * target_fps.num;
  for (std::size_t k = 0;; ++k) {
    std::size_t index = round_half_up(step_num * k, step_den);
    if (index >= frame_count) break;
    if (out.empty() || out.back() != index) out.push_back(index);
  }
  return out;
}

FrameIndexList sample_at_fps(const VideoClip& clip, Rational target_fps) {
  return sample_at_fps(clip.size(), clip.fps(), target_fps);
}

FrameIndexList uniform_sample_excluding_first(std::size_t n_frames, std::size_t k) {
  if (n_frames < 2) throw ValidationError("need at least 2 frames to sample excluding the first");
  if (k < 1) throw ValidationError("sample count must be at least 1");
  FrameIndexList out;
  if (n_frames - 1 < k) {
    for (std::size_t i = 1; i < n_frames; ++i) out.push_back(i);
    return out;
  }
  for (std::size_t j = 1; j <= k; ++j) {
    std::size_t index = round_half_up(static_cast<unsigned __int128>(j) * (n_frames - 1), k);
    if (out.empty() || out.back() != index) out.push_back(index);
  }
  return out;
}

bool is_valid_index_list(const FrameIndexList& indices, std::size_t frame_count) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= frame_count) return false;
    if (i > 0 && indices[i] <= indices[i - 1]) return false;
  }
  return true;
}

}  // namespace sparkle::media
