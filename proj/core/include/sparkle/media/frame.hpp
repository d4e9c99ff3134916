#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sparkle::media {

/// Positive rational number, used for frame rates ("16/1", "30000/1001").
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  /// Accepts "n/d" or a bare integer "n". Throws ValidationError.
  static Rational parse(const std::string& text);

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num * b.den == b.num * a.den;
  }
};

/// Row-major interleaved 8-bit RGB image.
class Frame {
 public:
  Frame(int width, int height);
  Frame(int width, int height, std::vector<std::uint8_t> rgb);
  /// Uniform color.
  Frame(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> pixels() { return pixels_; }

  std::uint8_t at(int x, int y, int channel) const {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }
  std::uint8_t& at(int x, int y, int channel) {
    return pixels_[(static_cast<std::size_t>(y) * width_ + x) * 3 + channel];
  }

  bool same_size(const Frame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// BT.601 luma of every pixel, row-major, in [0, 255].
std::vector<double> luma(const Frame& frame);

/// Ordered frames sharing one size, plus the native frame rate.
class VideoClip {
 public:
  VideoClip(std::vector<Frame> frames, Rational fps);

  const std::vector<Frame>& frames() const { return frames_; }
  const Frame& frame(std::size_t index) const { return frames_.at(index); }
  std::size_t size() const { return frames_.size(); }
  Rational fps() const { return fps_; }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }

  friend bool operator==(const VideoClip&, const VideoClip&) = default;

 private:
  std::vector<Frame> frames_;
  Rational fps_;
};

}  // namespace sparkle::media
