#include <benchmark/benchmark.h>

#include <random>

#include "sparkle/bait/bait.hpp"
#include "sparkle/guidance/canny.hpp"
#include "sparkle/guidance/compose.hpp"
#include "sparkle/motion/classifier.hpp"
#include "sparkle/motion/flow.hpp"
#include "sparkle/motion/homography.hpp"
#include "synthetic.hpp"

using namespace sparkle;

namespace {

void BM_Flow(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  auto clip = testing::make_synthetic_clip(7, testing::CameraMotion::Translation, 2, size).clip;
  for (auto _ : state) {
    benchmark::DoNotOptimize(motion::compute_flow(clip.frames()[0], clip.frames()[1]));
  }
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Flow)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Ransac(benchmark::State& state) {
  std::mt19937_64 rng(3);
  auto flow = testing::flow_from_homography(testing::random_homography(rng, 64), 64, 64);
  auto pts = motion::flow_correspondences(flow, static_cast<int>(state.range(0)));
  std::uniform_real_distribution<double> noise(-10, 10);
  for (std::size_t i = 0; i < pts.size(); i += 3) pts[i].dst = pts[i].src + Eigen::Vector2d(noise(rng), noise(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(motion::estimate_homography_ransac(pts, {}, 11));
  }
  state.counters["points"] = static_cast<double>(pts.size());
}
BENCHMARK(BM_Ransac)->Arg(8)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ClassifyClip(benchmark::State& state) {
  auto clip = testing::make_synthetic_clip(5, testing::CameraMotion::Static).clip;
  for (auto _ : state) {
    benchmark::DoNotOptimize(motion::classify_clip_static(clip, {}, 1));
  }
}
BENCHMARK(BM_ClassifyClip)->Unit(benchmark::kMillisecond);

void BM_Vote(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(9);
  std::vector<bait::MaskVideo> passes(k, bait::MaskVideo(64, 64, 16));
  for (auto& p : passes)
    for (std::size_t t = 0; t < 16; ++t)
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) p[t].set(x, y, rng() & 1u);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bait::vote_masks(passes));
  }
  state.SetItemsProcessed(state.iterations() * 64 * 64 * 16);
}
BENCHMARK(BM_Vote)->Arg(3)->Arg(7)->Arg(15);

void BM_Canny(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  auto clip = testing::make_synthetic_clip(2, testing::CameraMotion::Static, 1, size).clip;
  for (auto _ : state) {
    benchmark::DoNotOptimize(guidance::canny_edges(clip.frames()[0]));
  }
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Canny)->Arg(64)->Arg(256);

void BM_Compose(benchmark::State& state) {
  auto src = testing::make_synthetic_clip(2, testing::CameraMotion::Static).clip;
  auto bg = testing::make_synthetic_clip(3, testing::CameraMotion::Static).clip;
  auto se = guidance::canny_edges(src), be = guidance::canny_edges(bg);
  bait::MaskVideo mask(64, 64, src.size());
  for (std::size_t t = 0; t < mask.size(); ++t) mask[t].fill_rect(16, 16, 48, 48);
  for (auto _ : state) {
    benchmark::DoNotOptimize(guidance::compose_guidance(se, be, mask, 2));
  }
}
BENCHMARK(BM_Compose);

}  // namespace

BENCHMARK_MAIN();
