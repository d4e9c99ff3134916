#include "sparkle/media/frame.hpp"

#include <charconv>

#include "sparkle/error.hpp"

namespace sparkle::media {

namespace {

std::int64_t parse_int(std::string_view text, const std::string& whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("invalid rational '" + whole + "'");
  }
  return value;
}

}  // namespace

std::string Rational::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Rational Rational::parse(const std::string& text) {
  std::string_view view = text;
  while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
  while (!view.empty() && (view.back() == ' ' || view.back() == '\t' || view.back() == '\r' ||
                           view.back() == '\n')) {
    view.remove_suffix(1);
  }
  Rational r;
  auto slash = view.find_first_of("/:");
  if (slash == std::string_view::npos) {
    r.num = parse_int(view, text);
    r.den = 1;
  } else {
    r.num = parse_int(view.substr(0, slash), text);
    r.den = parse_int(view.substr(slash + 1), text);
  }
  if (r.num <= 0 || r.den <= 0) throw ValidationError("rational must be positive: '" + text + "'");
  return r;
}

Frame::Frame(int width, int height) : Frame(width, height, 0, 0, 0) {}

Frame::Frame(int width, int height, std::vector<std::uint8_t> rgb)
    : width_(width), height_(height), pixels_(std::move(rgb)) {
  if (width < 1 || height < 1) throw ValidationError("frame dimensions must be positive");
  if (pixels_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw ValidationError("pixel buffer length does not match " + std::to_string(width) + "x" +
                          std::to_string(height) + "x3");
  }
}

Frame::Frame(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw ValidationError("frame dimensions must be positive");
  pixels_.resize(static_cast<std::size_t>(width) * height * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = r;
    pixels_[i + 1] = g;
    pixels_[i + 2] = b;
  }
}

std::vector<double> luma(const Frame& frame) {
  auto px = frame.pixels();
  std::vector<double> out(frame.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
  }
  return out;
}

VideoClip::VideoClip(std::vector<Frame> frames, Rational fps) : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) throw ValidationError("clip must contain at least one frame");
  if (fps_.num <= 0 || fps_.den <= 0) throw ValidationError("clip fps must be positive");
  for (const auto& f : frames_) {
    if (!f.same_size(frames_.front())) throw ValidationError("mixed frame dimensions in clip");
  }
}

}  // namespace sparkle::media
