#pragma once

#include <cstdint>
#include <vector>

#include "sparkle/media/frame.hpp"

namespace sparkle::guidance {

/// Binary edge map; bytes are 0 or 1.
class EdgeMap {
 public:
  EdgeMap(int width, int height);
  EdgeMap(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  std::size_t count() const;

  friend bool operator==(const EdgeMap&, const EdgeMap&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

struct CannyParams {
  double low = 0.1;   // fraction of the frame's max gradient magnitude
  double high = 0.2;
};

/// BT.601 luma, 5-tap Gaussian (sigma 1), Sobel, 4-direction non-maximum
/// suppression, 8-connected hysteresis. Requires 0 < low < high <= 1.
EdgeMap canny_edges(const media::Frame& frame, CannyParams params = {});

std::vector<EdgeMap> canny_edges(const media::VideoClip& clip, CannyParams params = {});

}  // namespace sparkle::guidance
