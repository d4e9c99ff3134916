#pragma once

#include <filesystem>
#include <vector>

#include "sparkle/media/frame.hpp"

namespace sparkle::motion {

struct FlowVector {
  float u = 0.0f;
  float v = 0.0f;
  friend bool operator==(const FlowVector&, const FlowVector&) = default;
};

/// Dense per-pixel displacement from frame a to frame b.
class FlowField {
 public:
  FlowField(int width, int height);
  FlowField(int width, int height, std::vector<FlowVector> vectors);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<FlowVector>& vectors() const { return vectors_; }
  const FlowVector& at(int x, int y) const { return vectors_[static_cast<std::size_t>(y) * width_ + x]; }
  FlowVector& at(int x, int y) { return vectors_[static_cast<std::size_t>(y) * width_ + x]; }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  int width_;
  int height_;
  std::vector<FlowVector> vectors_;
};

/// Pyramidal block matching. Each level searches +-search_radius pixels around
/// the upsampled coarser estimate; the finest level adds a parabolic
/// sub-pixel refinement.
struct FlowParams {
  int levels = 3;
  int block_size = 8;
  int search_radius = 4;
  /// Blocks whose mean squared luma gradient falls below this are textureless
  /// and get zero flow.
  double texture_threshold = 1e-3;
  bool subpixel = true;
};

FlowField compute_flow(const media::Frame& a, const media::Frame& b, const FlowParams& params = {});

/// Arithmetic mean of sqrt(u^2 + v^2) over every pixel.
double mean_motion_magnitude(const FlowField& flow);

/// Middlebury .flo: float 202021.25, int32 width, int32 height, then
/// interleaved float32 (u, v), all little-endian.
FlowField read_flow_file(const std::filesystem::path& path);
void write_flow_file(const FlowField& flow, const std::filesystem::path& path);

}  // namespace sparkle::motion
