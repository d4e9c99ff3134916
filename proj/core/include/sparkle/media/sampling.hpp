#pragma once

#include <cstddef>
#include <vector>

#include "sparkle/media/frame.hpp"

namespace sparkle::media {

/// Strictly increasing frame indices into one clip.
using FrameIndexList = std::vector<std::size_t>;

/// Indices round_half_up(k * fps / target_fps), k = 0, 1, ..., while inside the
/// clip; duplicates dropped. Index 0 is always present.
FrameIndexList sample_at_fps(std::size_t frame_count, Rational fps, Rational target_fps);
FrameIndexList sample_at_fps(const VideoClip& clip, Rational target_fps);

/// k indices evenly spaced over (0, n_frames - 1], ending at n_frames - 1.
/// When fewer than k non-first frames exist, returns 1..n_frames-1.
FrameIndexList uniform_sample_excluding_first(std::size_t n_frames, std::size_t k);

bool is_valid_index_list(const FrameIndexList& indices, std::size_t frame_count);

}  // namespace sparkle::media
