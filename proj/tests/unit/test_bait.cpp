#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "sparkle/bait/bait.hpp"
#include "sparkle/error.hpp"
#include "sparkle/workers/client.hpp"

using namespace sparkle;
using namespace sparkle::bait;
using workers::Json;

namespace {

// 12 frames at 8 fps: the 2 fps sample is {0, 4, 8}.
media::VideoClip blank_clip(std::size_t n = 12, int w = 16, int h = 16) {
  return media::VideoClip(std::vector<media::Frame>(n, media::Frame(w, h)), {8, 1});
}

Json boxes(std::initializer_list<std::array<int, 4>> rects, const std::string& label = "cat") {
  Json out = Json::array();
  for (const auto& r : rects) out.push_back({{"label", label}, {"x0", r[0]}, {"y0", r[1]}, {"x1", r[2]}, {"y1", r[3]}});
  return {{"boxes", out}};
}

workers::WorkerClient client_for(Json fixture) {
  return workers::WorkerClient(workers::WorkerRoutes::all(std::make_shared<workers::ScriptedTransport>(std::move(fixture))));
}

MaskVideo box_video(int w, int h, std::size_t n, int x0, int y0, int x1, int y1) {
  MaskVideo v(w, h, n);
  for (std::size_t t = 0; t < n; ++t) v[t].fill_rect(x0, y0, x1, y1);
  return v;
}

MaskVideo random_stack_member(std::mt19937_64& rng, int w, int h, std::size_t n) {
  MaskVideo v(w, h, n);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t t = 0; t < n; ++t)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) v[t].set(x, y, coin(rng));
  return v;
}

// Independent per-pixel counter.
bool brute_majority(const std::vector<MaskVideo>& passes, std::size_t t, int x, int y) {
  int on = 0;
  for (const auto& p : passes) on += p[t].at(x, y) ? 1 : 0;
  return on * 2 > static_cast<int>(passes.size());
}

}  // namespace

TEST(CollectAnchors, AllSampledFramesGrounded) {
  auto grounder = client_for({{"c:ground:*", boxes({{2, 2, 6, 6}})}});
  auto set = collect_anchors(blank_clip(), {"cat"}, grounder, "c");
  EXPECT_EQ(set.n_sampled_frames, 3u);
  EXPECT_EQ(set.n_anchors(), 3u);
  EXPECT_EQ(set.anchors[2].frame_index, 8u);
}

TEST(CollectAnchors, MissedFrameDropped) {
  auto grounder = client_for({{"c:ground:*", boxes({{2, 2, 6, 6}})}, {"c:ground:f000004", {{"boxes", Json::array()}}}});
  auto set = collect_anchors(blank_clip(), {"cat"}, grounder, "c");
  EXPECT_EQ(set.n_anchors(), 2u);
  EXPECT_EQ(set.anchors[0].frame_index, 0u);
  EXPECT_EQ(set.anchors[1].frame_index, 8u);
}

TEST(CollectAnchors, NeverDetectedIsAnError) {
  auto grounder = client_for({{"c:ground:*", {{"boxes", Json::array()}}}});
  try {
    collect_anchors(blank_clip(), {"cat"}, grounder, "c");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "foreground never detected");
  }
}

TEST(TrackFromAnchor, StaticBoxCoversEveryFrame) {
  auto tracker = client_for({{"c:track:*", {{"policy", "box-follow"}}}});
  AnchorFrame anchor{4, {{"cat", 2, 3, 7, 9, 4}}};
  EXPECT_EQ(track_from_anchor(blank_clip(), anchor, tracker, "c"), box_video(16, 16, 12, 2, 3, 7, 9));
}

TEST(TrackFromAnchor, TwoBoxesUnion) {
  auto tracker = client_for({{"c:track:*", {{"policy", "box-follow"}}}});
  AnchorFrame anchor{0, {{"cat", 0, 0, 4, 4, 0}, {"dog", 10, 10, 14, 16, 0}}};
  auto pass = track_from_anchor(blank_clip(), anchor, tracker, "c");
  EXPECT_EQ(pass, union_of(box_video(16, 16, 12, 0, 0, 4, 4), box_video(16, 16, 12, 10, 10, 14, 16)));
}

TEST(TrackFromAnchor, DropoutEmptiesOneFrame) {
  auto tracker = client_for({{"c:track:*", {{"policy", "box-follow"}, {"dropout", {5}}}}});
  AnchorFrame anchor{0, {{"cat", 2, 2, 6, 6, 0}}};
  auto pass = track_from_anchor(blank_clip(), anchor, tracker, "c");
  for (std::size_t t = 0; t < 12; ++t) EXPECT_EQ(pass[t].count(), t == 5 ? 0u : 16u) << t;
}

TEST(Vote, WorkedExamples) {
  // Single pixel, N = 3 with two votes, N = 4 with two votes.
  auto on = box_video(1, 1, 1, 0, 0, 1, 1);
  MaskVideo off(1, 1, 1);
  EXPECT_EQ(vote_masks({on, on, off})[0].count(), 1u);
  EXPECT_EQ(vote_masks({on, on, off, off})[0].count(), 0u);
  EXPECT_EQ(vote_masks({on})[0].count(), 1u);
}

TEST(Vote, ShapeMismatchAndEmpty) {
  EXPECT_THROW(vote_masks({}), ValidationError);
  EXPECT_THROW(vote_masks({MaskVideo(4, 4, 2), MaskVideo(4, 4, 3)}), ValidationError);
  EXPECT_THROW(vote_masks({MaskVideo(4, 4, 2), MaskVideo(4, 5, 2)}), ValidationError);
}

TEST(Vote, MatchesBruteForceCounter) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 1 + static_cast<int>(rng() % 16), h = 1 + static_cast<int>(rng() % 16);
    const std::size_t n = 1 + rng() % 8, k = 1 + rng() % 7;
    std::vector<MaskVideo> passes;
    for (std::size_t i = 0; i < k; ++i) passes.push_back(random_stack_member(rng, w, h, n));
    auto out = vote_masks(passes);
    for (std::size_t t = 0; t < n; ++t)
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) ASSERT_EQ(out[t].at(x, y), brute_majority(passes, t, x, y));
  }
}

TEST(Vote, ExhaustiveOnTinyStacks) {
  // Every assignment of k <= 5 votes to one pixel.
  for (std::size_t k = 1; k <= 5; ++k) {
    for (unsigned bits = 0; bits < (1u << k); ++bits) {
      std::vector<MaskVideo> passes;
      for (std::size_t i = 0; i < k; ++i) {
        MaskVideo v(1, 1, 1);
        v[0].set(0, 0, (bits >> i) & 1u);
        passes.push_back(v);
      }
      EXPECT_EQ(vote_masks(passes)[0].at(0, 0), brute_majority(passes, 0, 0, 0));
    }
  }
}

TEST(Vote, PermutationUnanimityAndBounds) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MaskVideo> passes;
    const std::size_t k = 1 + rng() % 7;
    for (std::size_t i = 0; i < k; ++i) passes.push_back(random_stack_member(rng, 8, 8, 4));
    auto out = vote_masks(passes);
    auto shuffled = passes;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(vote_masks(shuffled), out);
    for (std::size_t t = 0; t < 4; ++t)
      for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) {
          bool all = true, any = false;
          for (const auto& p : passes) {
            all = all && p[t].at(x, y);
            any = any || p[t].at(x, y);
          }
          if (all) {
            EXPECT_TRUE(out[t].at(x, y));
          }
          if (!any) {
            EXPECT_FALSE(out[t].at(x, y));
          }
        }
    EXPECT_EQ(vote_masks(std::vector<MaskVideo>(3, passes[0])), passes[0]);
  }
}

TEST(Vote, AddingForegroundPassNeverRemovesAtSameParity) {
  // Two extra passes keep N's parity; if both mark q, q can only gain support.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<MaskVideo> passes;
    const std::size_t k = 1 + rng() % 5;
    for (std::size_t i = 0; i < k; ++i) passes.push_back(random_stack_member(rng, 6, 6, 2));
    auto before = vote_masks(passes);
    auto grown = passes;
    grown.push_back(box_video(6, 6, 2, 0, 0, 6, 6));
    grown.push_back(box_video(6, 6, 2, 0, 0, 6, 6));
    auto after = vote_masks(grown);
    for (std::size_t t = 0; t < 2; ++t)
      for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 6; ++x) {
          if (before[t].at(x, y)) {
            EXPECT_TRUE(after[t].at(x, y));
          }
          EXPECT_EQ(after[t].at(x, y), brute_majority(grown, t, x, y));
        }
  }
}

TEST(RunBait, DropoutInOnePassSuppressed) {
  auto workers = client_for({{"c:ground:*", boxes({{4, 4, 10, 10}})},
                             {"c:track:*", {{"policy", "box-follow"}}},
                             {"c:track:f000004:*", {{"policy", "box-follow"}, {"dropout", {6}}}}});
  auto clip = blank_clip();
  auto result = run_bait(clip, {"cat"}, workers, workers, "c");
  EXPECT_EQ(result.n_anchors, 3u);
  EXPECT_EQ(result.consensus, box_video(16, 16, 12, 4, 4, 10, 10));
  EXPECT_EQ(result.per_pass_disagreement[0], 0.0);
  EXPECT_DOUBLE_EQ(result.per_pass_disagreement[1], 36.0 / (256.0 * 12));
}

TEST(RunBait, GlitchBlobInOnePassSuppressed) {
  auto workers = client_for(
      {{"c:ground:*", boxes({{4, 4, 10, 10}})},
       {"c:track:*", {{"policy", "box-follow"}}},
       {"c:track:f000008:*", {{"policy", "box-follow"}, {"blobs", {{{"frame", 3}, {"box", {12, 12, 14, 14}}}}}}}});
  auto clip = blank_clip();
  auto result = run_bait(clip, {"cat"}, workers, workers, "c", false);
  // Oracle: recount the scripted passes directly.
  std::vector<MaskVideo> passes;
  for (std::size_t a : {0u, 4u, 8u}) {
    auto p = box_video(16, 16, 12, 4, 4, 10, 10);
    if (a == 8) p[3].fill_rect(12, 12, 14, 14);
    passes.push_back(p);
  }
  for (std::size_t t = 0; t < 12; ++t)
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) EXPECT_EQ(result.consensus[t].at(x, y), brute_majority(passes, t, x, y));
  EXPECT_FALSE(result.consensus[3].at(12, 12));
}

TEST(RunBait, SingleAnchorIsThatPass) {
  auto workers = client_for({{"c:ground:*", {{"boxes", Json::array()}}},
                             {"c:ground:f000008", boxes({{1, 1, 3, 3}})},
                             {"c:track:*", {{"policy", "box-follow"}, {"dropout", {2}}}}});
  auto clip = blank_clip();
  auto result = run_bait(clip, {"cat"}, workers, workers, "c");
  EXPECT_EQ(result.n_anchors, 1u);
  EXPECT_EQ(result.n_sampled_frames, 3u);
  EXPECT_EQ(result.consensus, track_from_anchor(clip, {8, {{"cat", 1, 1, 3, 3, 8}}}, workers, "c"));
  EXPECT_EQ(result.consensus[2].count(), 0u);
}

TEST(RunBait, ConcurrentEqualsSequential) {
  auto workers = client_for({{"c:ground:*", boxes({{4, 4, 10, 10}})},
                             {"c:track:*", {{"policy", "box-follow"}, {"offsets", {{0, 0}, {1, 0}, {2, 1}, {3, 1}}}}},
                             {"c:track:f000000:*", {{"policy", "box-follow"}, {"dropout", {1, 2}}}}});
  auto clip = blank_clip();
  EXPECT_EQ(run_bait(clip, {"cat"}, workers, workers, "c", true).consensus,
            run_bait(clip, {"cat"}, workers, workers, "c", false).consensus);
}

TEST(RunBait, WritesMasksAndDiagnostics) {
  auto workers = client_for({{"c:ground:*", boxes({{4, 4, 10, 10}})},
                             {"c:ground:f000000", {{"boxes", Json::array()}}},
                             {"c:track:*", {{"policy", "box-follow"}}}});
  auto result = run_bait(blank_clip(), {"cat"}, workers, workers, "c");
  sparkle::testing::TempDir dir;
  write_bait_result(result, dir.path() / "mask");
  EXPECT_EQ(load_mask_video(dir.path() / "mask"), result.consensus);
  auto diag = Json::parse(sparkle::testing::read_text(dir.path() / "mask" / "diagnostics.json"));
  EXPECT_EQ(diag["n_anchors"], 2);
  EXPECT_EQ(diag["n_sampled_frames"], 3);
  EXPECT_EQ(diag["undetected_sampled_frames"], 1);
  EXPECT_EQ(diag["anchor_frames"], Json({4, 8}));
  EXPECT_EQ(diag["per_pass_disagreement"].size(), 2u);
}

TEST(Masks, UnionDilateAndPngDir) {
  auto a = box_video(8, 8, 2, 0, 0, 2, 2);
  auto b = box_video(8, 8, 2, 6, 6, 8, 8);
  EXPECT_EQ(union_of(a, b)[1].count(), 8u);
  EXPECT_THROW(union_of(a, MaskVideo(8, 8, 3)), ValidationError);
  MaskVideo dot(8, 8, 1);
  dot[0].set(4, 4, true);
  EXPECT_EQ(dilate(dot, 0), dot);
  EXPECT_EQ(dilate(dot, 1), box_video(8, 8, 1, 3, 3, 6, 6));
  EXPECT_EQ(dilate(dot, 10)[0].count(), 64u);
}
