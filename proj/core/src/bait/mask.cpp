#include "sparkle/bait/mask.hpp"

#include <algorithm>

#include "sparkle/error.hpp"
#include "sparkle/media/clip_io.hpp"
#include "sparkle/media/png.hpp"

namespace sparkle::bait {

namespace fs = std::filesystem;

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0)) {
  if (width < 1 || height < 1) throw ValidationError("mask dimensions must be positive");
}

BinaryMask::BinaryMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) throw ValidationError("mask dimensions must be positive");
  if (bits_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("mask buffer does not match dimensions");
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

void BinaryMask::fill_rect(int x0, int y0, int x1, int y1, bool value) {
  x0 = std::clamp(x0, 0, width_);
  x1 = std::clamp(x1, 0, width_);
  y0 = std::clamp(y0, 0, height_);
  y1 = std::clamp(y1, 0, height_);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) set(x, y, value);
  }
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

MaskVideo::MaskVideo(int width, int height, std::size_t frame_count)
    : width_(width), height_(height), masks_(frame_count, BinaryMask(width, height)) {}

MaskVideo::MaskVideo(int width, int height, std::vector<BinaryMask> masks)
    : width_(width), height_(height), masks_(std::move(masks)) {
  for (const auto& m : masks_) {
    if (m.width() != width || m.height() != height) throw ValidationError("mask dimensions differ within video");
  }
}

MaskVideo union_of(const MaskVideo& a, const MaskVideo& b) {
  if (!a.same_shape(b)) throw ValidationError("mask union: shape mismatch");
  MaskVideo out = a;
  for (std::size_t t = 0; t < a.size(); ++t) {
    std::vector<std::uint8_t> bits(a[t].bits().size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = a[t].bits()[i] | b[t].bits()[i];
    out[t] = BinaryMask(a.width(), a.height(), std::move(bits));
  }
  return out;
}

MaskVideo dilate(const MaskVideo& masks, int radius) {
  if (radius < 0) throw ValidationError("dilation radius must be >= 0");
  if (radius == 0) return masks;
  MaskVideo out(masks.width(), masks.height(), masks.size());
  const int w = masks.width(), h = masks.height();
  for (std::size_t t = 0; t < masks.size(); ++t) {
    // Separable: horizontal then vertical max filter.
    BinaryMask horizontal(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool any = false;
        for (int dx = -radius; dx <= radius && !any; ++dx) {
          int xx = x + dx;
          any = xx >= 0 && xx < w && masks[t].at(xx, y);
        }
        horizontal.set(x, y, any);
      }
    }
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        bool any = false;
        for (int dy = -radius; dy <= radius && !any; ++dy) {
          int yy = y + dy;
          any = yy >= 0 && yy < h && horizontal.at(x, yy);
        }
        out[t].set(x, y, any);
      }
    }
  }
  return out;
}

void write_mask_video(const MaskVideo& masks, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
  for (std::size_t t = 0; t < masks.size(); ++t) {
    auto png = media::encode_png_gray(masks.width(), masks.height(), masks[t].bits(), 1);
    media::write_file_bytes(dir / media::frame_file_name(t), png);
  }
}

BinaryMask binarize(int width, int height, const std::vector<std::uint8_t>& gray) {
  std::vector<std::uint8_t> bits(gray.size());
  for (std::size_t i = 0; i < gray.size(); ++i) bits[i] = gray[i] >= 128 ? 1 : 0;
  return BinaryMask(width, height, std::move(bits));
}

MaskVideo load_mask_video(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".png" && entry.path().stem().string().size() == 6) files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no frames found in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<BinaryMask> masks;
  for (const auto& f : files) {
    auto image = media::decode_png(media::read_file_bytes(f));
    std::vector<std::uint8_t> gray(static_cast<std::size_t>(image.width) * image.height);
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = image.data[i * image.channels];
    masks.push_back(binarize(image.width, image.height, gray));
  }
  int w = masks.front().width(), h = masks.front().height();
  return MaskVideo(w, h, std::move(masks));
}

}  // namespace sparkle::bait
