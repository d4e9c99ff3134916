#include "sparkle/guidance/canny.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sparkle/error.hpp"

namespace sparkle::guidance {

EdgeMap::EdgeMap(int width, int height) : EdgeMap(width, height, std::vector<std::uint8_t>(
                                                                     static_cast<std::size_t>(std::max(width, 0)) *
                                                                     static_cast<std::size_t>(std::max(height, 0)))) {}

EdgeMap::EdgeMap(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 1 || height < 1) throw ValidationError("edge map dimensions must be positive");
  if (bits_.size() != static_cast<std::size_t>(width) * height) throw ValidationError("edge map size mismatch");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t EdgeMap::count() const { return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0}); }

namespace {

struct Plane {
  int w, h;
  std::vector<double> v;
  double at(int x, int y) const {
    x = std::clamp(x, 0, w - 1);
    y = std::clamp(y, 0, h - 1);
    return v[static_cast<std::size_t>(y) * w + x];
  }
};

Plane gaussian_blur(const Plane& in) {
  double k[5];
  double sum = 0.0;
  for (int i = -2; i <= 2; ++i) sum += k[i + 2] = std::exp(-0.5 * i * i);
  for (double& x : k) x /= sum;

  Plane tmp{in.w, in.h, std::vector<double>(in.v.size())};
  for (int y = 0; y < in.h; ++y)
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * in.at(x + i, y);
      tmp.v[static_cast<std::size_t>(y) * in.w + x] = acc;
    }
  Plane out{in.w, in.h, std::vector<double>(in.v.size())};
  for (int y = 0; y < in.h; ++y)
    for (int x = 0; x < in.w; ++x) {
      double acc = 0.0;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * tmp.at(x, y + i);
      out.v[static_cast<std::size_t>(y) * in.w + x] = acc;
    }
  return out;
}

}  // namespace

EdgeMap canny_edges(const media::Frame& frame, CannyParams params) {
  if (!(params.low > 0.0 && params.low < params.high && params.high <= 1.0)) {
    throw ValidationError("canny thresholds need 0 < low < high <= 1");
  }
  const int w = frame.width();
  const int h = frame.height();
  const Plane smooth = gaussian_blur({w, h, media::luma(frame)});

  std::vector<double> mag(smooth.v.size());
  std::vector<std::uint8_t> dir(smooth.v.size());
  double max_mag = 0.0;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double gx = (smooth.at(x + 1, y - 1) + 2 * smooth.at(x + 1, y) + smooth.at(x + 1, y + 1)) -
                        (smooth.at(x - 1, y - 1) + 2 * smooth.at(x - 1, y) + smooth.at(x - 1, y + 1));
      const double gy = (smooth.at(x - 1, y + 1) + 2 * smooth.at(x, y + 1) + smooth.at(x + 1, y + 1)) -
                        (smooth.at(x - 1, y - 1) + 2 * smooth.at(x, y - 1) + smooth.at(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::hypot(gx, gy);
      max_mag = std::max(max_mag, mag[i]);
      // Quantize the gradient direction to 0, 45, 90, 135 degrees.
      double angle = std::atan2(gy, gx) * 180.0 / M_PI;
      if (angle < 0) angle += 180.0;
      dir[i] = angle < 22.5 || angle >= 157.5 ? 0 : angle < 67.5 ? 1 : angle < 112.5 ? 2 : 3;
    }
  EdgeMap empty(w, h);
  if (max_mag <= 1e-9) return empty;

  auto mag_at = [&](int x, int y) {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
    return mag[static_cast<std::size_t>(y) * w + x];
  };
  static constexpr int kStep[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  std::vector<double> thin(mag.size(), 0.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const auto [dx, dy] = kStep[dir[i]];
      // Strict on one side, inclusive on the other, so plateaus keep one pixel.
      if (mag[i] > mag_at(x - dx, y - dy) && mag[i] >= mag_at(x + dx, y + dy)) thin[i] = mag[i];
    }

  const double lo = params.low * max_mag;
  const double hi = params.high * max_mag;
  std::vector<std::uint8_t> bits(mag.size(), 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < thin.size(); ++i) {
    if (thin[i] >= hi && !bits[i]) {
      bits[i] = 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const std::size_t j = stack.back();
        stack.pop_back();
        const int jx = static_cast<int>(j % w), jy = static_cast<int>(j / w);
        for (int ny = jy - 1; ny <= jy + 1; ++ny)
          for (int nx = jx - 1; nx <= jx + 1; ++nx) {
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t k = static_cast<std::size_t>(ny) * w + nx;
            if (!bits[k] && thin[k] >= lo) {
              bits[k] = 1;
              stack.push_back(k);
            }
          }
      }
    }
  }
  return EdgeMap(w, h, std::move(bits));
}

std::vector<EdgeMap> canny_edges(const media::VideoClip& clip, CannyParams params) {
  std::vector<EdgeMap> out;
  out.reserve(clip.size());
  for (const auto& f : clip.frames()) out.push_back(canny_edges(f, params));
  return out;
}

}  // namespace sparkle::guidance
