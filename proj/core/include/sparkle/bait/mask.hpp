#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace sparkle::bait {

/// One binary foreground map; bytes are 0 (background) or 1 (foreground).
class BinaryMask {
 public:
  BinaryMask(int width, int height);
  BinaryMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool value) { bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }

  /// Sets every pixel of [x0, x1) x [y0, y1), clipped to the mask.
  void fill_rect(int x0, int y0, int x1, int y1, bool value = true);
  std::size_t count() const;

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

/// Per-frame binary masks of one clip.
class MaskVideo {
 public:
  MaskVideo(int width, int height, std::size_t frame_count);
  MaskVideo(int width, int height, std::vector<BinaryMask> masks);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return masks_.size(); }
  const BinaryMask& operator[](std::size_t t) const { return masks_[t]; }
  BinaryMask& operator[](std::size_t t) { return masks_[t]; }
  const std::vector<BinaryMask>& masks() const { return masks_; }

  bool same_shape(const MaskVideo& other) const {
    return width_ == other.width_ && height_ == other.height_ && masks_.size() == other.masks_.size();
  }

  friend bool operator==(const MaskVideo&, const MaskVideo&) = default;

 private:
  int width_;
  int height_;
  std::vector<BinaryMask> masks_;
};

/// Per-pixel union; shapes must match.
MaskVideo union_of(const MaskVideo& a, const MaskVideo& b);

/// Chebyshev (square) dilation by `radius` pixels; radius 0 is the identity.
MaskVideo dilate(const MaskVideo& masks, int radius);

/// png-dir of 1-bit PNGs (NNNNNN.png). Loading binarizes at 0.5 of full scale.
void write_mask_video(const MaskVideo& masks, const std::filesystem::path& dir);
MaskVideo load_mask_video(const std::filesystem::path& dir);

/// Gray bytes (0..255) to a mask, foreground where value >= 128.
BinaryMask binarize(int width, int height, const std::vector<std::uint8_t>& gray);

}  // namespace sparkle::bait
