#include "sparkle/pipeline/stages.hpp"

#include "sparkle/bait/bait.hpp"
#include "sparkle/error.hpp"
#include "sparkle/guidance/compose.hpp"
#include "sparkle/media/clip_io.hpp"
#include "sparkle/workers/client.hpp"

namespace sparkle::pipeline {

namespace fs = std::filesystem;

StageRoles StageRoles::from(workers::WorkerClient& client) {
  return {client, client, client, client, client, client};
}

namespace {

// Thrown inside a stage when a gate or filter turns the clip down.
struct Rejection {
  std::string reason;
};

struct Stage {
  ManifestRecord& r;
  const StageContext& ctx;
  std::uint64_t seed;

  fs::path artifact_root() const { return ctx.config.artifact_dir; }
  fs::path artifact(const std::string& role) const {
    auto it = r.artifact_paths.find(role);
    if (it == r.artifact_paths.end()) throw ValidationError(r.clip_id + ": missing artifact " + role);
    return artifact_root() / it->second;
  }
  std::string record_artifact(const std::string& role, const std::string& name) {
    const std::string rel = r.clip_id + "/" + name;
    std::error_code ec;
    fs::create_directories(artifact_root() / r.clip_id, ec);
    r.artifact_paths[role] = rel;
    return rel;
  }

  media::VideoClip source() const {
    fs::path p = r.source_path;
    if (p.empty()) throw ValidationError(r.clip_id + ": no source_path");
    if (p.is_relative()) p = ctx.manifest_dir / p;
    return media::load_clip(p, media::parse_clip_format(r.source_format));
  }

  void gate(gate::GateResult result, const std::string& reason) {
    const bool ok = result.accepted;
    r.gate_results.push_back(std::move(result));
    if (!ok) throw Rejection{reason};
  }

  void stage1() {
    const auto clip = source();
    const auto verdict = motion::classify_clip_static(clip, ctx.config.motion, seed);
    auto pairs = nlohmann::json::array();
    for (const auto& p : verdict.pairs) {
      pairs.push_back({{"from", p.from_index},
                       {"to", p.to_index},
                       {"r", p.inlier_ratio},
                       {"m", p.mean_magnitude},
                       {"moving", p.moving}});
    }
    r.diagnostics["motion"] = {{"clip_static", verdict.clip_static}, {"pairs", std::move(pairs)}};
    if (!verdict.clip_static) throw Rejection{"camera movement"};
    if (ctx.config.vlm_motion_check && ctx.roles.vlm.detect_camera_motion(clip, r.clip_id)) {
      r.diagnostics["motion"]["vlm_moving"] = true;
      throw Rejection{"camera movement (vlm)"};
    }
    if (ctx.config.source_gate && !r.reference_edit_path.empty()) {
      fs::path p = r.reference_edit_path;
      if (p.is_relative()) p = ctx.manifest_dir / p;
      const auto edited = media::load_clip(p, media::guess_clip_format(p));
      gate(gate::gate_source(clip, edited, r.edit_prompt, ctx.roles.scorer, r.clip_id, ctx.config.thresholds.source),
           "source gate");
    }
  }

  void stage2() {
    if (r.edit_prompt.empty()) throw ValidationError(r.clip_id + ": empty edit_prompt");
    const auto clip = source();
    const auto edited = ctx.roles.editor.edit_image(clip.frame(0), r.edit_prompt, r.clip_id, seed);
    media::write_frame_png(edited, artifact_root() / record_artifact("edited_first", "edited_first.png"));
    gate(gate::gate_first_frame(clip.frame(0), edited, r.edit_prompt, ctx.roles.scorer, r.clip_id,
                                gate::GateRule::FirstFrame, ctx.config.thresholds.first_frame),
         "first-frame gate");
  }

  void stage3() {
    const auto clip = source();
    const auto edited = media::load_frame_png(artifact("edited_first"));
    if (r.foreground_labels.empty()) {
      r.foreground_labels = ctx.roles.vlm.identify_foreground(clip.frame(0), edited, r.clip_id);
      if (r.foreground_labels.empty()) throw Rejection{"no foreground identified"};
    }
    media::Frame background = edited;
    for (std::size_t i = 0; i < r.foreground_labels.size(); ++i) {
      const std::string instruction = "Remove the " + r.foreground_labels[i];
      auto removed = ctx.roles.editor.edit_image(background, instruction, r.clip_id, seed + i);
      auto result = gate::gate_first_frame(background, removed, instruction, ctx.roles.scorer,
                                           r.clip_id + ":remove" + std::to_string(i), gate::GateRule::Removal,
                                           ctx.config.thresholds.removal);
      background = std::move(removed);
      gate(std::move(result), "removal gate");
    }
    media::write_frame_png(background, artifact_root() / record_artifact("background_image", "background.png"));
    if (r.background_caption.empty()) {
      r.background_caption = ctx.roles.vlm.extract_background_caption(r.edit_prompt, r.clip_id);
    }
    const auto animated = ctx.roles.animator.animate_background(background, r.background_caption, clip.size(),
                                                                clip.fps(), r.clip_id, seed);
    media::write_clip(animated, artifact_root() / record_artifact("background_clip", "background"),
                      media::ClipFormat::PngDir);
  }

  void stage4() {
    const auto clip = source();
    if (r.foreground_labels.empty()) throw ValidationError(r.clip_id + ": no foreground labels");
    const auto result = [&] {
      try {
        return bait::run_bait(clip, r.foreground_labels, ctx.roles.grounder, ctx.roles.tracker, r.clip_id);
      } catch (const ValidationError& e) {
        if (std::string(e.what()) == "foreground never detected") throw Rejection{e.what()};
        throw;
      }
    }();
    bait::write_bait_result(result, artifact_root() / record_artifact("mask_video", "mask"));
    r.diagnostics["bait"] = result.diagnostics();
  }

  void stage5() {
    const auto clip = source();
    const auto background = media::load_clip(artifact("background_clip"), media::ClipFormat::PngDir);
    const auto mask = bait::load_mask_video(artifact("mask_video"));
    const auto edited_first = media::load_frame_png(artifact("edited_first"));

    const auto composed =
        guidance::compose_guidance(guidance::canny_edges(clip, ctx.config.canny),
                                   guidance::canny_edges(background, ctx.config.canny), mask,
                                   ctx.config.mask_dilation);
    guidance::write_guidance(composed, clip.fps(), artifact_root() / record_artifact("guidance_video", "guidance"));
    const auto final_clip = ctx.roles.animator.generate_controlled(
        edited_first, guidance::render_guidance(composed, clip.fps()), r.edit_prompt, r.clip_id, seed);
    media::write_clip(final_clip, artifact_root() / record_artifact("final_clip", "final"), media::ClipFormat::PngDir);
    gate(gate::gate_final_video(clip, final_clip, r.edit_prompt, ctx.roles.scorer, r.clip_id,
                                ctx.config.thresholds.final_video),
         "final gate");
  }
};

}  // namespace

ManifestRecord run_stage(const ManifestRecord& record, int stage, const StageContext& ctx) {
  if (stage < 1 || stage > kStageCount) throw ValidationError("stage must be 1..5");
  if (record.status(stage) == StageStatus::Done) return record;
  for (int k = 1; k < stage; ++k) {
    if (record.status(k) != StageStatus::Done) {
      throw ValidationError(record.clip_id + ": stage " + std::to_string(stage) + " needs stage " +
                            std::to_string(k) + " done");
    }
  }

  ManifestRecord r = record;
  r.failure.reset();
  const std::uint64_t seed = stage_seed(ctx.config.master_seed, r.clip_id, stage);
  r.seeds[std::to_string(stage)] = seed;
  Stage s{r, ctx, seed};
  try {
    switch (stage) {
      case 1: s.stage1(); break;
      case 2: s.stage2(); break;
      case 3: s.stage3(); break;
      case 4: s.stage4(); break;
      case 5: s.stage5(); break;
    }
    r.set_status(stage, StageStatus::Done);
  } catch (const Rejection& rej) {
    r.set_status(stage, StageStatus::Rejected);
    r.failure = Failure{stage, rej.reason};
  } catch (const std::exception& e) {
    ManifestRecord failed = record;
    failed.set_status(stage, StageStatus::Failed);
    failed.failure = Failure{stage, e.what()};
    return failed;
  }
  return r;
}

}  // namespace sparkle::pipeline
