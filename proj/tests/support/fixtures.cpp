#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sparkle/media/clip_io.hpp"
#include "sparkle/workers/client.hpp"
#include "synthetic.hpp"

namespace sparkle::testing {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::random_device rd;
  const fs::path base = fs::temp_directory_path();
  for (int attempt = 0; attempt < 100; ++attempt) {
    fs::path p = base / ("sparkle-test-" + std::to_string(rd()) + std::to_string(attempt));
    if (fs::create_directory(p)) {
      path_ = p;
      return;
    }
  }
  throw std::runtime_error("cannot create temp dir");
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

namespace {

using workers::Json;
namespace rid = workers::request_id;

struct ClipSpec {
  std::string id;
  CameraMotion motion;
  std::uint64_t seed;
  std::string prompt;
  std::string caption;
  std::vector<std::string> labels;
  double first_frame_score;
};

Json box(const std::string& label, int x0, int y0, int x1, int y1) {
  return {{"label", label}, {"x0", x0}, {"y0", y0}, {"x1", x1}, {"y1", y1}};
}

}  // namespace

PipelineScenario write_pipeline_scenario(const fs::path& dir, int concurrency) {
  const std::vector<ClipSpec> specs = {
      {"clip-static-a", CameraMotion::Static, 101, "Replace the background with a snowy mountain village",
       "a snowy mountain village", {"red cube"}, 8.6},
      {"clip-pan", CameraMotion::Translation, 102, "Replace the background with a desert at noon",
       "a desert at noon", {"red cube"}, 9.0},
      {"clip-weak-edit", CameraMotion::Static, 103, "Replace the background with a neon city street at night",
       "a neon city street at night", {"red cube"}, 7.9},
      {"clip-static-b", CameraMotion::Static, 104, "Replace the background with an autumn forest",
       "an autumn forest", {"person", "dog"}, 8.0},
  };

  PipelineScenario s;
  s.fixture_json = Json::object();
  Json& fx = s.fixture_json;
  fs::create_directories(dir / "clips");
  std::ofstream manifest(dir / "manifest.jsonl");
  for (const auto& spec : specs) {
    const auto clip = make_synthetic_clip(spec.seed, spec.motion).clip;
    media::write_clip(clip, dir / "clips" / spec.id, media::ClipFormat::PngDir);

    const std::string& id = spec.id;
    fx[rid::edit(id, spec.prompt)] = {{"policy", "tint"}, {"rgb", {200, 120, 40}}};
    fx[id + ":score:first-frame:f000000"] = {{"overall", spec.first_frame_score}};
    fx[rid::describe(id, "foreground_labels")] = {{"labels", spec.labels}};
    fx[rid::describe(id, "background_caption")] = {{"caption", spec.caption}};
    for (std::size_t i = 0; i < spec.labels.size(); ++i) {
      fx[rid::edit(id, "Remove the " + spec.labels[i])] = {{"policy", "identity"}};
      fx[id + ":remove" + std::to_string(i) + ":score:removal:f000000"] = {{"overall", 8.5 + 0.25 * i}};
    }
    fx[rid::animate(id, spec.caption)] = {{"policy", "drift"}, {"delta", 1}};
    fx[rid::generate(id)] = {{"policy", "static"}};
    fx[id + ":score:final-4frame:*"] = {{"overall", 8.4}};

    if (spec.labels.size() == 1) {
      fx[id + ":ground:*"] = {{"boxes", {box(spec.labels[0], 20, 20, 44, 44)}}};
      fx[id + ":track:*"] = {{"policy", "box-follow"}};
    } else {
      // Frame 8 misses the dog; the pass anchored at frame 4 drops frame 10
      // and the pass anchored at frame 12 picks up a background blob.
      Json both = {{"boxes", {box("person", 8, 8, 28, 40), box("dog", 36, 36, 56, 56)}}};
      fx[id + ":ground:f000000"] = both;
      fx[id + ":ground:f000004"] = both;
      fx[id + ":ground:f000008"] = {{"boxes", {box("person", 8, 8, 28, 40)}}};
      fx[id + ":ground:f000012"] = both;
      fx[id + ":track:*"] = {{"policy", "box-follow"}};
      fx[id + ":track:f000004:8,8,28,40:forward"] = {{"policy", "box-follow"}, {"dropout", {10}}};
      fx[id + ":track:f000012:36,36,56,56:backward"] = {
          {"policy", "box-follow"}, {"blobs", {{{"frame", 2}, {"box", {0, 60, 2, 62}}}}}};
    }

    pipeline::ManifestRecord r;
    r.clip_id = id;
    r.source_path = "clips/" + id;
    r.theme = "Location";
    r.subtheme = "Nature";
    r.scene = spec.caption;
    r.edit_prompt = spec.prompt;
    manifest << r.to_json().dump() << "\n";
  }
  manifest.close();

  s.manifest = dir / "manifest.jsonl";
  s.fixture = dir / "workers.json";
  std::ofstream(s.fixture) << fx.dump(2) << "\n";
  s.config_file = dir / "pipeline.conf";
  std::ofstream(s.config_file) << "[pipeline]\nconcurrency = " << concurrency
                               << "\nmaster_seed = 42\nartifact_dir = artifacts\n\n"
                               << "[workers]\nmode = mock\nfixture = workers.json\n";
  s.config = pipeline::load_config(s.config_file);
  return s;
}

}  // namespace sparkle::testing

namespace sparkle::testing {

std::vector<std::vector<int>> score_rows_with_means(const std::vector<double>& means, int n) {
  std::vector<int> sums;
  for (double m : means) sums.push_back(static_cast<int>(std::lround(m * n)));
  // Anchor column: fill with floor(mean), then bump the first rows.
  const int base = sums[0] / n;
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n), std::vector<int>(means.size(), 0));
  for (int i = 0; i < n; ++i) rows[i][0] = base + (i < sums[0] - base * n ? 1 : 0);
  for (std::size_t d = 1; d < means.size(); ++d) {
    if (sums[d] > sums[0]) throw std::invalid_argument("capped column mean above the anchor mean");
    for (int i = 0; i < n; ++i) rows[i][d] = rows[i][0];
    int excess = sums[0] - sums[d];
    for (int pass = 0; excess > 0; ++pass) {
      for (int i = 0; i < n && excess > 0; ++i) {
        if (rows[i][d] > 1) {
          --rows[i][d];
          --excess;
        }
      }
      if (pass > 5) throw std::invalid_argument("column mean unreachable");
    }
  }
  return rows;
}

std::string judge_reply(const std::vector<std::string>& names, const std::vector<int>& scores,
                        const std::string& reasoning) {
  std::string out = "- Brief reasoning: " + reasoning + "\n";
  for (std::size_t d = 0; d < names.size(); ++d) out += "- " + names[d] + ": " + std::to_string(scores[d]) + "\n";
  return out;
}

}  // namespace sparkle::testing
