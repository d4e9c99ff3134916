#include "synthetic.hpp"

#include <cmath>
#include <numbers>

namespace sparkle::testing {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double NoiseTexture::lattice(std::int64_t ix, std::int64_t iy, std::uint64_t salt) const {
  std::uint64_t h = mix(seed_ ^ mix(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ull ^
                                    mix(static_cast<std::uint64_t>(iy) + salt)));
  return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

double NoiseTexture::octave(double x, double y, double cell, std::uint64_t salt) const {
  double gx = x / cell, gy = y / cell;
  auto ix = static_cast<std::int64_t>(std::floor(gx));
  auto iy = static_cast<std::int64_t>(std::floor(gy));
  double fx = gx - static_cast<double>(ix), fy = gy - static_cast<double>(iy);
  double v00 = lattice(ix, iy, salt), v10 = lattice(ix + 1, iy, salt);
  double v01 = lattice(ix, iy + 1, salt), v11 = lattice(ix + 1, iy + 1, salt);
  return (v00 * (1 - fx) + v10 * fx) * (1 - fy) + (v01 * (1 - fx) + v11 * fx) * fy;
}

double NoiseTexture::sample(double x, double y) const {
  return 0.7 * octave(x, y, cell_, 1) + 0.3 * octave(x, y, cell_ * 0.5, 2);
}

media::Frame render_textured(int width, int height, const NoiseTexture& tex, double shift_x, double shift_y,
                             double angle_rad) {
  media::Frame frame(width, height);
  const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
  const double c = std::cos(-angle_rad), s = std::sin(-angle_rad);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double px = x - cx - shift_x, py = y - cy - shift_y;
      double wx = c * px - s * py + cx, wy = s * px + c * py + cy;
      auto v = static_cast<std::uint8_t>(std::lround(30.0 + 195.0 * tex.sample(wx, wy)));
      frame.at(x, y, 0) = v;
      frame.at(x, y, 1) = v;
      frame.at(x, y, 2) = static_cast<std::uint8_t>(255 - v);
    }
  }
  return frame;
}

void paint_block(media::Frame& frame, const NoiseTexture& tex, double x0, double y0, int size) {
  int ix0 = static_cast<int>(std::lround(x0)), iy0 = static_cast<int>(std::lround(y0));
  for (int y = iy0; y < iy0 + size; ++y) {
    for (int x = ix0; x < ix0 + size; ++x) {
      if (x < 0 || y < 0 || x >= frame.width() || y >= frame.height()) continue;
      auto v = static_cast<std::uint8_t>(std::lround(255.0 * tex.sample(x - ix0, y - iy0)));
      frame.at(x, y, 0) = v;
      frame.at(x, y, 1) = static_cast<std::uint8_t>(255 - v);
      frame.at(x, y, 2) = v;
    }
  }
}

SyntheticClip make_synthetic_clip(std::uint64_t seed, CameraMotion motion, int frames, int size) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  NoiseTexture background(rng());
  NoiseTexture foreground(rng(), 2.0);
  constexpr int kFramesPerSample = 4;  // 8 fps sampled at 2 fps

  double step_x = 0, step_y = 0, step_angle = 0;
  if (motion == CameraMotion::Translation) {
    double per_pair = 1.5 + 2.5 * unit(rng);
    double dir = 2.0 * std::numbers::pi * unit(rng);
    step_x = per_pair * std::cos(dir) / kFramesPerSample;
    step_y = per_pair * std::sin(dir) / kFramesPerSample;
  } else if (motion == CameraMotion::Rotation) {
    double per_pair_deg = (3.0 + 3.0 * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    step_angle = per_pair_deg * std::numbers::pi / 180.0 / kFramesPerSample;
  }

  double fg_x = 8.0 + 40.0 * unit(rng), fg_y = 8.0 + 40.0 * unit(rng);
  double fg_vx = (unit(rng) - 0.5) * 2.0, fg_vy = (unit(rng) - 0.5) * 2.0;

  std::vector<media::Frame> out;
  for (int t = 0; t < frames; ++t) {
    media::Frame f = render_textured(size, size, background, step_x * t, step_y * t, step_angle * t);
    paint_block(f, foreground, fg_x + fg_vx * t, fg_y + fg_vy * t, 8);
    out.push_back(std::move(f));
  }
  return {media::VideoClip(std::move(out), media::Rational{8, 1}), motion};
}

Eigen::Matrix3d random_homography(std::mt19937_64& rng, int size) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double c = 0.5 * (size - 1);
  double angle = u(rng) * 5.0 * std::numbers::pi / 180.0;
  double scale = 1.0 + 0.05 * u(rng);
  Eigen::Matrix3d center, uncenter, similarity, perspective;
  center << 1, 0, -c, 0, 1, -c, 0, 0, 1;
  uncenter << 1, 0, c, 0, 1, c, 0, 0, 1;
  similarity << scale * std::cos(angle), -scale * std::sin(angle), 5.0 * u(rng),
      scale * std::sin(angle), scale * std::cos(angle), 5.0 * u(rng), 0, 0, 1;
  perspective << 1, 0, 0, 0, 1, 0, 1e-3 * u(rng), 1e-3 * u(rng), 1;
  return uncenter * perspective * similarity * center;
}

motion::FlowField flow_from_homography(const Eigen::Matrix3d& H, int width, int height) {
  motion::FlowField flow(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Eigen::Vector3d p = H * Eigen::Vector3d(x, y, 1.0);
      flow.at(x, y) = {static_cast<float>(p.x() / p.z() - x), static_cast<float>(p.y() / p.z() - y)};
    }
  }
  return flow;
}

}  // namespace sparkle::testing
