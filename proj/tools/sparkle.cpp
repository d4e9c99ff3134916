// sparkle: command line front end for the synthesis pipeline and the
// benchmark harness. Exit codes: 0 success, 2 bad input, 3 worker failure.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sparkle/bait/bait.hpp"
#include "sparkle/bench/aggregate.hpp"
#include "sparkle/error.hpp"
#include "sparkle/gate/gates.hpp"
#include "sparkle/guidance/canny.hpp"
#include "sparkle/guidance/compose.hpp"
#include "sparkle/media/clip_io.hpp"
#include "sparkle/pipeline/config.hpp"
#include "sparkle/pipeline/runner.hpp"
#include "sparkle/pipeline/stats.hpp"

namespace fs = std::filesystem;
using namespace sparkle;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitWorker = 3;

// A pipeline run that leaves failed records exits with the worker code; the
// manifest holds the reasons.
int run_stages(const fs::path& manifest, const fs::path& config_path, const std::string& stages, bool quiet) {
  auto config = pipeline::load_config(config_path);
  pipeline::RunOptions options;
  std::tie(options.first_stage, options.last_stage) = pipeline::parse_stage_range(stages);
  auto report = pipeline::run_pipeline(manifest, config, options);
  if (!quiet) {
    for (const auto& r : pipeline::read_manifest(manifest)) {
      std::cout << r.clip_id;
      for (int k = 1; k <= pipeline::kStageCount; ++k) std::cout << " " << k << ":" << to_string(r.status(k));
      if (r.failure) std::cout << "  (stage " << r.failure->stage << ": " << r.failure->reason << ")";
      std::cout << "\n";
    }
    std::cout << report.records_touched << " records touched, " << report.stages_run << " stages run\n";
  }
  if (report.stats.failed > 0) {
    std::cerr << "sparkle: " << report.stats.failed << " record(s) failed\n";
    return kExitWorker;
  }
  return 0;
}

std::string default_clip_id(const fs::path& clip) {
  auto p = clip;
  if (!p.has_filename()) p = p.parent_path();
  return p.stem().string();
}

media::VideoClip load_any(const fs::path& path) { return media::load_clip(path, media::guess_clip_format(path)); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Background-replacement data synthesis and benchmark scoring"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only report errors");

  std::string manifest, config_path, stages = "1-5";

  auto* filter = app.add_subcommand("filter-static", "Run the static-camera filter (stage 1) over a manifest");
  filter->add_option("manifest", manifest, "Manifest JSONL")->required();
  filter->add_option("-c,--config", config_path, "Pipeline config")->required();

  auto* synth = app.add_subcommand("synthesize", "Advance manifest records through the pipeline stages");
  synth->add_option("manifest", manifest, "Manifest JSONL")->required();
  synth->add_option("-c,--config", config_path, "Pipeline config")->required();
  synth->add_option("--stages", stages, "Stage window, e.g. 2-5")->capture_default_str();

  std::string clip_path, clip_id, out_dir;
  std::vector<std::string> labels;
  auto* fuse = app.add_subcommand("fuse-masks", "Anchor-voted foreground masks for one clip");
  fuse->add_option("clip", clip_path, "Clip (png-dir or .y4m)")->required();
  fuse->add_option("--labels", labels, "Foreground labels")->required()->delimiter(',');
  fuse->add_option("-c,--config", config_path, "Config with the worker settings")->required();
  fuse->add_option("-o,--out", out_dir, "Output mask directory")->required();
  fuse->add_option("--clip-id", clip_id, "Request id prefix (default: clip directory name)");

  std::string src_path, bg_path, mask_path;
  int dilation = 0;
  guidance::CannyParams canny;
  auto* compose = app.add_subcommand("compose-guidance", "Merge source and background edges under a mask");
  compose->add_option("src", src_path, "Source clip")->required();
  compose->add_option("bg", bg_path, "Background clip")->required();
  compose->add_option("mask", mask_path, "Mask png-dir")->required();
  compose->add_option("-o,--out", out_dir, "Output guidance directory")->required();
  compose->add_option("--dilation", dilation, "Mask dilation radius")->capture_default_str();
  compose->add_option("--low", canny.low, "Canny low threshold")->capture_default_str();
  compose->add_option("--high", canny.high, "Canny high threshold")->capture_default_str();

  std::string edited_path, rule_name = "final-4frame", prompt;
  std::optional<double> threshold;
  auto* gate_cmd = app.add_subcommand("gate", "Score an edit against a quality gate");
  gate_cmd->add_option("src", src_path, "Source clip")->required();
  gate_cmd->add_option("edited", edited_path, "Edited clip")->required();
  gate_cmd->add_option("--rule", rule_name, "source-2fps | first-frame | removal | final-4frame (or final)")
      ->capture_default_str();
  gate_cmd->add_option("--prompt", prompt, "Edit instruction")->required();
  gate_cmd->add_option("-c,--config", config_path, "Config with the worker settings")->required();
  gate_cmd->add_option("--threshold", threshold, "Override the configured threshold");
  gate_cmd->add_option("--clip-id", clip_id, "Request id prefix (default: source directory name)");

  std::string records_path, protocol_name = "sparkle6", format = "markdown", group_by = "model";
  auto* eval = app.add_subcommand("evaluate", "Aggregate judge responses into a score table");
  eval->add_option("records", records_path, "JSONL with judge_response_text per video")->required();
  eval->add_option("--protocol", protocol_name, "sparkle6 | openve3")->capture_default_str();
  eval->add_option("--format", format, "markdown | csv")->capture_default_str();
  eval->add_option("--group-by", group_by, "model | model-theme | model-subtheme")->capture_default_str();

  bool as_json = false;
  auto* stats = app.add_subcommand("stats", "Dataset statistics for a manifest");
  stats->add_option("manifest", manifest, "Manifest JSONL")->required();
  stats->add_flag("--json", as_json, "Print the raw report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*filter) return run_stages(manifest, config_path, "1", quiet);
    if (*synth) return run_stages(manifest, config_path, stages, quiet);

    if (*fuse) {
      auto config = pipeline::load_config(config_path);
      auto workers = pipeline::make_workers(config.workers);
      auto clip = load_any(clip_path);
      auto result = bait::run_bait(clip, labels, *workers.client, *workers.client,
                                   clip_id.empty() ? default_clip_id(clip_path) : clip_id);
      if (config.mask_dilation > 0) result.consensus = bait::dilate(result.consensus, config.mask_dilation);
      bait::write_bait_result(result, out_dir);
      if (!quiet) std::cout << result.diagnostics().dump(2) << "\n";
      return 0;
    }

    if (*compose) {
      auto src = load_any(src_path);
      auto bg = load_any(bg_path);
      auto mask = bait::load_mask_video(mask_path);
      auto out = guidance::compose_guidance(guidance::canny_edges(src, canny), guidance::canny_edges(bg, canny),
                                            mask, dilation);
      guidance::write_guidance(out, src.fps(), out_dir);
      if (!quiet) std::cout << out.size() << " guidance frames written to " << out_dir << "\n";
      return 0;
    }

    if (*gate_cmd) {
      auto config = pipeline::load_config(config_path);
      auto workers = pipeline::make_workers(config.workers);
      const auto rule = gate::parse_gate_rule(rule_name == "final" ? "final-4frame" : rule_name);
      const double t = threshold.value_or(config.thresholds.for_rule(rule));
      const std::string id = clip_id.empty() ? default_clip_id(src_path) : clip_id;
      auto src = load_any(src_path);
      auto edited = load_any(edited_path);
      gate::GateResult result;
      switch (rule) {
        case gate::GateRule::Source2Fps:
          result = gate::gate_source(src, edited, prompt, *workers.client, id, t);
          break;
        case gate::GateRule::FirstFrame:
        case gate::GateRule::Removal:
          result = gate::gate_first_frame(src.frames().at(0), edited.frames().at(0), prompt, *workers.client, id,
                                          rule, t);
          break;
        case gate::GateRule::Final4Frame:
          result = gate::gate_final_video(src, edited, prompt, *workers.client, id, t);
          break;
      }
      if (!quiet) std::cout << result.to_json().dump(2) << "\n";
      std::cout << (result.accepted ? "accepted" : "rejected") << "\n";
      return 0;
    }

    if (*eval) {
      const auto& protocol = bench::protocol_by_name(protocol_name);
      auto records = bench::load_eval_records(records_path, protocol);
      auto rows = bench::aggregate(records, bench::parse_group_by(group_by));
      std::cout << bench::render_table(rows, bench::parse_table_format(format));
      return 0;
    }

    if (*stats) {
      auto report = pipeline::compute_stats(fs::path(manifest));
      if (as_json) {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        std::cout << pipeline::render_stats(report);
      }
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "sparkle: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const IoError& e) {
    std::cerr << "sparkle: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const WorkerError& e) {
    std::cerr << "sparkle: worker failure: " << e.what() << "\n";
    return kExitWorker;
  }
  return 0;
}
