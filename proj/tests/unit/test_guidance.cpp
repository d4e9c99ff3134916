#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "sparkle/error.hpp"
#include "sparkle/guidance/canny.hpp"
#include "sparkle/guidance/compose.hpp"
#include "sparkle/media/clip_io.hpp"
#include "sparkle/media/png.hpp"

using namespace sparkle;
using namespace sparkle::guidance;

namespace {

media::Frame step_frame(int size, int c) {
  media::Frame f(size, size);
  for (int y = 0; y < size; ++y)
    for (int x = c; x < size; ++x)
      for (int ch = 0; ch < 3; ++ch) f.at(x, y, ch) = 255;
  return f;
}

// Columns where the raw Sobel magnitude peaks on row y.
std::set<int> sobel_argmax_columns(const media::Frame& f, int y) {
  auto l = media::luma(f);
  const int w = f.width(), h = f.height();
  auto px = [&](int x, int yy) {
    x = std::clamp(x, 0, w - 1);
    yy = std::clamp(yy, 0, h - 1);
    return l[static_cast<std::size_t>(yy) * w + x];
  };
  std::vector<double> mag(w);
  for (int x = 0; x < w; ++x) {
    double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
    double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
    mag[x] = std::hypot(gx, gy);
  }
  double best = *std::max_element(mag.begin(), mag.end());
  std::set<int> cols;
  for (int x = 0; x < w; ++x)
    if (mag[x] == best) cols.insert(x);
  return cols;
}

EdgeMap random_edges(std::mt19937_64& rng, int w, int h) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(w) * h);
  for (auto& b : bits) b = rng() & 1u;
  return EdgeMap(w, h, std::move(bits));
}

bait::MaskVideo random_mask(std::mt19937_64& rng, int w, int h, std::size_t n) {
  bait::MaskVideo m(w, h, n);
  for (std::size_t t = 0; t < n; ++t)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) m[t].set(x, y, rng() & 1u);
  return m;
}

media::Frame noise_frame(std::uint64_t seed, int w, int h) {
  std::mt19937_64 rng(seed);
  media::Frame f(w, h);
  for (auto& p : f.pixels()) p = static_cast<std::uint8_t>(rng());
  return f;
}

}  // namespace

TEST(Canny, UniformFrameHasNoEdges) {
  EXPECT_EQ(canny_edges(media::Frame(16, 16, 128, 128, 128)).count(), 0u);
}

TEST(Canny, StepEdgeConfinedToBoundaryColumns) {
  for (int c = 3; c <= 12; ++c) {
    auto f = step_frame(16, c);
    auto edges = canny_edges(f);
    EXPECT_GT(edges.count(), 0u);
    for (int y = 0; y < 16; ++y) {
      std::set<int> allowed = sobel_argmax_columns(f, y);
      EXPECT_EQ(allowed, (std::set<int>{c - 1, c}));
      bool row_has_edge = false;
      for (int x = 0; x < 16; ++x) {
        if (!edges.at(x, y)) continue;
        row_has_edge = true;
        EXPECT_TRUE(allowed.count(x)) << "c=" << c << " x=" << x << " y=" << y;
      }
      EXPECT_TRUE(row_has_edge) << "c=" << c << " y=" << y;
    }
  }
}

TEST(Canny, ThresholdValidation) {
  media::Frame f(8, 8);
  EXPECT_THROW(canny_edges(f, {0.5, 0.2}), ValidationError);
  EXPECT_THROW(canny_edges(f, {0.2, 0.2}), ValidationError);
  EXPECT_THROW(canny_edges(f, {0.0, 0.2}), ValidationError);
  EXPECT_THROW(canny_edges(f, {0.1, 1.5}), ValidationError);
  EXPECT_NO_THROW(canny_edges(f, {0.1, 1.0}));
}

TEST(Canny, DeterministicAndBinary) {
  auto f = noise_frame(3, 40, 30);
  auto a = canny_edges(f);
  EXPECT_EQ(a, canny_edges(f));
  EXPECT_EQ(a.width(), 40);
  EXPECT_EQ(a.height(), 30);
  for (auto b : a.bits()) EXPECT_TRUE(b == 0 || b == 1);
}

TEST(Canny, LowerHighThresholdKeepsMoreEdges) {
  auto f = noise_frame(4, 32, 32);
  EXPECT_GE(canny_edges(f, {0.05, 0.1}).count(), canny_edges(f, {0.3, 0.6}).count());
}

TEST(Canny, ClipOverload) {
  media::VideoClip clip({step_frame(16, 5), step_frame(16, 9)}, {8, 1});
  auto maps = canny_edges(clip);
  ASSERT_EQ(maps.size(), 2u);
  EXPECT_EQ(maps[1], canny_edges(step_frame(16, 9)));
}

TEST(Compose, DegenerateMasks) {
  std::mt19937_64 rng(1);
  std::vector<EdgeMap> src{random_edges(rng, 8, 8), random_edges(rng, 8, 8)};
  std::vector<EdgeMap> bg{random_edges(rng, 8, 8), random_edges(rng, 8, 8)};
  bait::MaskVideo all(8, 8, 2), none(8, 8, 2);
  for (std::size_t t = 0; t < 2; ++t) all[t].fill_rect(0, 0, 8, 8);
  EXPECT_EQ(compose_guidance(src, bg, all).frames, src);
  EXPECT_EQ(compose_guidance(src, bg, none).frames, bg);
}

TEST(Compose, ExhaustiveSelectionOnRandomInstances) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 4;
    std::vector<EdgeMap> src, bg;
    for (std::size_t t = 0; t < n; ++t) {
      src.push_back(random_edges(rng, 8, 8));
      bg.push_back(random_edges(rng, 8, 8));
    }
    auto mask = random_mask(rng, 8, 8, n);
    auto out = compose_guidance(src, bg, mask);
    ASSERT_EQ(out.size(), n);
    for (std::size_t t = 0; t < n; ++t)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          ASSERT_EQ(out.frames[t].at(x, y), mask[t].at(x, y) ? src[t].at(x, y) : bg[t].at(x, y));
          ASSERT_EQ(out.provenance[t].at(x, y), mask[t].at(x, y));
        }
    // Composing the output against itself reproduces it.
    EXPECT_EQ(compose_guidance(out.frames, out.frames, mask).frames, out.frames);
  }
}

TEST(Compose, DilationWidensForegroundLayer) {
  std::vector<EdgeMap> src{EdgeMap(9, 9, std::vector<std::uint8_t>(81, 1))};
  std::vector<EdgeMap> bg{EdgeMap(9, 9)};
  bait::MaskVideo mask(9, 9, 1);
  mask[0].set(4, 4, true);
  EXPECT_EQ(compose_guidance(src, bg, mask, 0).frames[0].count(), 1u);
  EXPECT_EQ(compose_guidance(src, bg, mask, 2).frames[0].count(), 25u);
  EXPECT_THROW(compose_guidance(src, bg, mask, -1), ValidationError);
}

TEST(Compose, TruncatesToShorterAndChecksShapes) {
  std::vector<EdgeMap> src(5, EdgeMap(4, 4)), bg(3, EdgeMap(4, 4));
  EXPECT_EQ(compose_guidance(src, bg, bait::MaskVideo(4, 4, 5)).size(), 3u);
  EXPECT_THROW(compose_guidance(src, bg, bait::MaskVideo(4, 4, 2)), ValidationError);
  EXPECT_THROW(compose_guidance(src, bg, bait::MaskVideo(4, 5, 5)), ValidationError);
  std::vector<EdgeMap> odd{EdgeMap(4, 4), EdgeMap(5, 4), EdgeMap(4, 4)};
  EXPECT_THROW(compose_guidance(src, odd, bait::MaskVideo(4, 4, 5)), ValidationError);
}

TEST(Compose, ProvenanceRoundTrip) {
  std::mt19937_64 rng(3);
  std::vector<EdgeMap> e{random_edges(rng, 7, 5), random_edges(rng, 7, 5), random_edges(rng, 7, 5)};
  auto mask = random_mask(rng, 7, 5, 3);
  mask[1].fill_rect(0, 0, 7, 5);  // run list starting with an empty background run
  auto g = compose_guidance(e, e, mask);
  EXPECT_EQ(provenance_from_json(provenance_to_json(g)), g.provenance);
  auto j = provenance_to_json(g);
  j["frames"][0].push_back(3);
  EXPECT_THROW(provenance_from_json(j), ValidationError);
}

TEST(Compose, RenderAndWrite) {
  std::vector<EdgeMap> e{EdgeMap(4, 2, {1, 0, 0, 1, 0, 1, 1, 0})};
  auto g = compose_guidance(e, e, bait::MaskVideo(4, 2, 1));
  auto clip = render_guidance(g, {16, 1});
  EXPECT_EQ(clip.frame(0).at(0, 0, 1), 255);
  EXPECT_EQ(clip.frame(0).at(1, 0, 1), 0);

  sparkle::testing::TempDir dir;
  write_guidance(g, {16, 1}, dir.path() / "guide");
  auto back = media::load_clip(dir.path() / "guide", media::ClipFormat::PngDir);
  EXPECT_EQ(back, clip);
  auto raw = media::decode_png(media::read_file_bytes(dir.path() / "guide" / "000000.png"));
  EXPECT_EQ(raw.channels, 1);
  EXPECT_EQ(raw.data, (std::vector<std::uint8_t>{255, 0, 0, 255, 0, 255, 255, 0}));
  auto prov = workers::Json::parse(sparkle::testing::read_text(dir.path() / "guide" / "provenance.json"));
  EXPECT_EQ(provenance_from_json(prov), g.provenance);
}
