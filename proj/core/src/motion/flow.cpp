#include "sparkle/motion/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparkle/error.hpp"

namespace sparkle::motion {

FlowField::FlowField(int width, int height)
    : width_(width), height_(height), vectors_(static_cast<std::size_t>(width) * height) {
  if (width < 1 || height < 1) throw ValidationError("flow field dimensions must be positive");
}

FlowField::FlowField(int width, int height, std::vector<FlowVector> vectors)
    : width_(width), height_(height), vectors_(std::move(vectors)) {
  if (width < 1 || height < 1) throw ValidationError("flow field dimensions must be positive");
  if (vectors_.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("flow vector count does not match dimensions");
  }
  for (const auto& v : vectors_) {
    if (!std::isfinite(v.u) || !std::isfinite(v.v)) throw ValidationError("flow field contains non-finite values");
  }
}

namespace {

struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  float clamped(int x, int y) const {
    return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
  }
};

Plane to_plane(const media::Frame& frame) {
  auto l = media::luma(frame);
  Plane p{frame.width(), frame.height(), std::vector<float>(l.begin(), l.end())};
  return p;
}

Plane downsample(const Plane& in) {
  Plane out{(in.width + 1) / 2, (in.height + 1) / 2, {}};
  out.data.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      float sum = in.clamped(2 * x, 2 * y) + in.clamped(2 * x + 1, 2 * y) + in.clamped(2 * x, 2 * y + 1) +
                  in.clamped(2 * x + 1, 2 * y + 1);
      out.data[static_cast<std::size_t>(y) * out.width + x] = 0.25f * sum;
    }
  }
  return out;
}

struct BlockGrid {
  int cols = 0;
  int rows = 0;
  std::vector<FlowVector> vectors;

  const FlowVector& at(int bx, int by) const { return vectors[static_cast<std::size_t>(by) * cols + bx]; }
};

struct BlockRect {
  int x0, y0, x1, y1;
};

double block_cost(const Plane& a, const Plane& b, const BlockRect& r, int dx, int dy) {
  double sum = 0.0;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) sum += std::fabs(a.at(x, y) - b.clamped(x + dx, y + dy));
  }
  return sum / static_cast<double>((r.x1 - r.x0) * (r.y1 - r.y0));
}

double gradient_energy(const Plane& a, const BlockRect& r) {
  double sum = 0.0;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      double gx = a.clamped(x + 1, y) - a.at(x, y);
      double gy = a.clamped(x, y + 1) - a.at(x, y);
      sum += gx * gx + gy * gy;
    }
  }
  return sum / static_cast<double>((r.x1 - r.x0) * (r.y1 - r.y0));
}

// Vertex offset of the parabola through (-1, cm), (0, c0), (1, cp).
float parabolic_offset(double cm, double c0, double cp) {
  double denom = cm - 2.0 * c0 + cp;
  if (denom <= 1e-12) return 0.0f;
  double offset = 0.5 * (cm - cp) / denom;
  return static_cast<float>(std::clamp(offset, -0.5, 0.5));
}

BlockGrid match_level(const Plane& a, const Plane& b, const BlockGrid* coarse, const FlowParams& params,
                      bool finest) {
  const int bs = params.block_size;
  BlockGrid grid;
  grid.cols = (a.width + bs - 1) / bs;
  grid.rows = (a.height + bs - 1) / bs;
  grid.vectors.resize(static_cast<std::size_t>(grid.cols) * grid.rows);

  for (int by = 0; by < grid.rows; ++by) {
    for (int bx = 0; bx < grid.cols; ++bx) {
      BlockRect rect{bx * bs, by * bs, std::min((bx + 1) * bs, a.width), std::min((by + 1) * bs, a.height)};
      FlowVector& out = grid.vectors[static_cast<std::size_t>(by) * grid.cols + bx];
      if (gradient_energy(a, rect) < params.texture_threshold) continue;

      int px = 0, py = 0;
      if (coarse != nullptr) {
        int cx = std::min(((rect.x0 + rect.x1) / 2) / 2 / bs, coarse->cols - 1);
        int cy = std::min(((rect.y0 + rect.y1) / 2) / 2 / bs, coarse->rows - 1);
        const FlowVector& c = coarse->at(cx, cy);
        px = static_cast<int>(std::lround(2.0f * c.u));
        py = static_cast<int>(std::lround(2.0f * c.v));
      }

      double best_cost = block_cost(a, b, rect, 0, 0);
      int best_dx = 0, best_dy = 0;
      auto consider = [&](int dx, int dy) {
        double cost = block_cost(a, b, rect, dx, dy);
        int norm = dx * dx + dy * dy;
        int best_norm = best_dx * best_dx + best_dy * best_dy;
        if (cost < best_cost - 1e-9 || (std::fabs(cost - best_cost) <= 1e-9 && norm < best_norm)) {
          best_cost = cost;
          best_dx = dx;
          best_dy = dy;
        }
      };
      const int r = params.search_radius;
      for (int dy = py - r; dy <= py + r; ++dy) {
        for (int dx = px - r; dx <= px + r; ++dx) consider(dx, dy);
      }

      out.u = static_cast<float>(best_dx);
      out.v = static_cast<float>(best_dy);
      // A zero-cost match is exact; refinement would only add bias.
      if (finest && params.subpixel && best_cost > 0.0) {
        out.u += parabolic_offset(block_cost(a, b, rect, best_dx - 1, best_dy), best_cost,
                                  block_cost(a, b, rect, best_dx + 1, best_dy));
        out.v += parabolic_offset(block_cost(a, b, rect, best_dx, best_dy - 1), best_cost,
                                  block_cost(a, b, rect, best_dx, best_dy + 1));
      }
    }
  }
  return grid;
}

}  // namespace

FlowField compute_flow(const media::Frame& a, const media::Frame& b, const FlowParams& params) {
  if (!a.same_size(b)) throw ValidationError("compute_flow: frame dimensions differ");
  if (params.levels < 1 || params.block_size < 1 || params.search_radius < 0) {
    throw ValidationError("compute_flow: invalid flow parameters");
  }
  std::vector<Plane> pyr_a{to_plane(a)};
  std::vector<Plane> pyr_b{to_plane(b)};
  while (static_cast<int>(pyr_a.size()) < params.levels && pyr_a.back().width >= 2 * params.block_size &&
         pyr_a.back().height >= 2 * params.block_size) {
    pyr_a.push_back(downsample(pyr_a.back()));
    pyr_b.push_back(downsample(pyr_b.back()));
  }

  BlockGrid grid;
  bool have_coarse = false;
  for (int level = static_cast<int>(pyr_a.size()) - 1; level >= 0; --level) {
    grid = match_level(pyr_a[level], pyr_b[level], have_coarse ? &grid : nullptr, params, level == 0);
    have_coarse = true;
  }

  FlowField flow(a.width(), a.height());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) flow.at(x, y) = grid.at(x / params.block_size, y / params.block_size);
  }
  return flow;
}

double mean_motion_magnitude(const FlowField& flow) {
  double sum = 0.0;
  for (const auto& v : flow.vectors()) sum += std::hypot(static_cast<double>(v.u), static_cast<double>(v.v));
  return sum / static_cast<double>(flow.vectors().size());
}

}  // namespace sparkle::motion
