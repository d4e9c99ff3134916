#include "sparkle/workers/client.hpp"

#include <algorithm>
#include <cstdio>

#include "sparkle/error.hpp"
#include "sparkle/hash.hpp"
#include "sparkle/workers/wire.hpp"

namespace sparkle::workers {

WorkerRoutes WorkerRoutes::all(std::shared_ptr<Transport> transport) {
  return {transport, transport, transport, transport, transport, transport, transport};
}

namespace request_id {

namespace {
std::string frame_tag(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "f%06zu", index);
  return buf;
}
}  // namespace

std::string ground(const std::string& clip_id, std::size_t frame_index) {
  return clip_id + ":ground:" + frame_tag(frame_index);
}

std::string edit(const std::string& clip_id, const std::string& instruction) {
  return clip_id + ":edit:" + hex64(fnv1a64(instruction));
}

std::string animate(const std::string& clip_id, const std::string& caption) {
  return clip_id + ":animate:" + hex64(fnv1a64(caption));
}

std::string generate(const std::string& clip_id) { return clip_id + ":generate"; }

std::string track(const std::string& clip_id, const BoundingBox& anchor, TrackDirection direction) {
  return clip_id + ":track:" + frame_tag(anchor.frame_index) + ":" + std::to_string(anchor.x0) + "," +
         std::to_string(anchor.y0) + "," + std::to_string(anchor.x1) + "," + std::to_string(anchor.y1) + ":" +
         to_string(direction);
}

std::string score(const ScoreKey& key) { return key.clip_id + ":score:" + key.tag + ":" + frame_tag(key.frame_index); }

std::string describe(const std::string& clip_id, const std::string& task) { return clip_id + ":describe:" + task; }

std::string judge(const std::string& video_id) { return video_id + ":judge"; }

}  // namespace request_id

namespace {

void check_same_size(const media::Frame& got, int width, int height, const std::string& what) {
  if (got.width() != width || got.height() != height) {
    throw WorkerError(what + " dimension mismatch: expected " + std::to_string(width) + "x" + std::to_string(height) +
                      ", got " + std::to_string(got.width()) + "x" + std::to_string(got.height()));
  }
}

std::vector<media::Frame> decode_frames(const Json& frames) {
  if (!frames.is_array()) throw WorkerError("malformed response: frames must be an array");
  std::vector<media::Frame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(decode_frame(f.get<std::string>()));
  return out;
}

}  // namespace

WorkerClient::WorkerClient(WorkerRoutes routes) : routes_(std::move(routes)) {}

Json WorkerClient::call(const std::shared_ptr<Transport>& transport, Role role, const std::string& id, Json payload) {
  if (!transport) throw WorkerError("no transport configured for role " + to_string(role));
  Json response = transport->post(route_for(role), make_envelope(id, std::move(payload)));
  return unwrap_result(response, id);
}

std::vector<BoundingBox> WorkerClient::ground(const media::Frame& frame, std::size_t frame_index,
                                              const std::vector<std::string>& labels, const std::string& clip_id) {
  if (labels.empty()) throw ValidationError("ground needs at least one label");
  Json result = call(routes_.grounder, Role::Grounder, request_id::ground(clip_id, frame_index),
                     {{"frame", encode_frame(frame)}, {"frame_index", frame_index}, {"labels", labels}});
  const auto it = result.find("boxes");
  if (it == result.end() || !it->is_array()) throw WorkerError("malformed response: missing boxes");
  std::vector<BoundingBox> boxes;
  for (const auto& j : *it) {
    BoundingBox box = box_from_json(j, frame_index);
    if (std::find(labels.begin(), labels.end(), box.label) == labels.end()) continue;
    if (!box.valid_for(frame.width(), frame.height())) {
      throw WorkerError("invalid box for '" + box.label + "': (" + std::to_string(box.x0) + "," +
                        std::to_string(box.y0) + "," + std::to_string(box.x1) + "," + std::to_string(box.y1) + ")");
    }
    boxes.push_back(std::move(box));
  }
  return boxes;
}

media::Frame WorkerClient::edit_image(const media::Frame& frame, const std::string& instruction,
                                      const std::string& clip_id, std::uint64_t seed) {
  if (instruction.empty()) throw ValidationError("edit instruction must be non-empty");
  Json result = call(routes_.editor, Role::Editor, request_id::edit(clip_id, instruction),
                     {{"frame", encode_frame(frame)}, {"instruction", instruction}, {"seed", seed}});
  if (!result.contains("frame")) throw WorkerError("malformed response: missing frame");
  media::Frame out = decode_frame(result.at("frame").get<std::string>());
  check_same_size(out, frame.width(), frame.height(), "edited frame");
  return out;
}

media::VideoClip WorkerClient::animate_background(const media::Frame& frame, const std::string& caption,
                                                  std::size_t n_frames, media::Rational fps,
                                                  const std::string& clip_id, std::uint64_t seed) {
  if (n_frames < 1) throw ValidationError("animate_background needs n_frames >= 1");
  Json result = call(routes_.animator, Role::Animator, request_id::animate(clip_id, caption),
                     {{"frame", encode_frame(frame)},
                      {"caption", caption},
                      {"n_frames", n_frames},
                      {"fps", fps.str()},
                      {"seed", seed}});
  if (!result.contains("frames")) throw WorkerError("malformed response: missing frames");
  auto frames = decode_frames(result.at("frames"));
  if (frames.size() != n_frames) {
    throw WorkerError("animator returned " + std::to_string(frames.size()) + " frames, expected " +
                      std::to_string(n_frames));
  }
  for (const auto& f : frames) check_same_size(f, frame.width(), frame.height(), "animated frame");
  frames[0] = frame;
  return media::VideoClip(std::move(frames), fps);
}

media::VideoClip WorkerClient::generate_controlled(const media::Frame& first_frame, const media::VideoClip& guidance,
                                                   const std::string& prompt, const std::string& clip_id,
                                                   std::uint64_t seed) {
  check_same_size(first_frame, guidance.width(), guidance.height(), "first frame");
  Json result = call(routes_.animator, Role::Animator, request_id::generate(clip_id),
                     {{"frame", encode_frame(first_frame)},
                      {"guidance", encode_clip(guidance)},
                      {"prompt", prompt},
                      {"n_frames", guidance.size()},
                      {"fps", guidance.fps().str()},
                      {"seed", seed}});
  if (!result.contains("frames")) throw WorkerError("malformed response: missing frames");
  auto frames = decode_frames(result.at("frames"));
  if (frames.size() != guidance.size()) {
    throw WorkerError("generator returned " + std::to_string(frames.size()) + " frames, expected " +
                      std::to_string(guidance.size()));
  }
  for (const auto& f : frames) check_same_size(f, guidance.width(), guidance.height(), "generated frame");
  return media::VideoClip(std::move(frames), guidance.fps());
}

bait::MaskVideo WorkerClient::propagate_mask(const media::VideoClip& clip, const BoundingBox& anchor,
                                             TrackDirection direction, const std::string& clip_id) {
  if (anchor.frame_index >= clip.size()) {
    throw ValidationError("anchor frame " + std::to_string(anchor.frame_index) + " outside clip of " +
                          std::to_string(clip.size()) + " frames");
  }
  if (!anchor.valid_for(clip.width(), clip.height())) throw ValidationError("invalid anchor box");
  Json result = call(routes_.tracker, Role::Tracker, request_id::track(clip_id, anchor, direction),
                     {{"frames", encode_clip(clip)},
                      {"width", clip.width()},
                      {"height", clip.height()},
                      {"n_frames", clip.size()},
                      {"anchor", box_to_json(anchor)},
                      {"direction", to_string(direction)}});
  const auto it = result.find("masks");
  if (it == result.end() || !it->is_array()) throw WorkerError("malformed response: missing masks");
  if (it->size() != clip.size()) {
    throw WorkerError("tracker returned " + std::to_string(it->size()) + " masks, expected " +
                      std::to_string(clip.size()));
  }
  std::vector<bait::BinaryMask> masks;
  masks.reserve(clip.size());
  for (const auto& m : *it) {
    bait::BinaryMask mask = decode_mask(m.get<std::string>());
    if (mask.width() != clip.width() || mask.height() != clip.height()) {
      throw WorkerError("mask dimension mismatch");
    }
    masks.push_back(std::move(mask));
  }
  return bait::MaskVideo(clip.width(), clip.height(), std::move(masks));
}

ScoreReport WorkerClient::score_edit(const media::Frame& before, const media::Frame& after,
                                     const std::string& prompt, const ScoreKey& key) {
  if (!before.same_size(after)) throw ValidationError("score_edit frames differ in size");
  Json result = call(routes_.scorer, Role::Scorer, request_id::score(key),
                     {{"before", encode_frame(before)},
                      {"after", encode_frame(after)},
                      {"prompt", prompt},
                      {"tag", key.tag},
                      {"frame_index", key.frame_index}});
  auto in_range = [](double v) { return v >= 0.0 && v <= 10.0; };
  ScoreReport report;
  try {
    report.overall = result.at("overall").get<double>();
    if (auto it = result.find("sub_scores"); it != result.end()) {
      report.sub_scores = it->get<std::map<std::string, double>>();
    }
  } catch (const Json::exception& e) {
    throw WorkerError(std::string("malformed score response: ") + e.what());
  }
  if (!in_range(report.overall)) throw WorkerError("score out of range: " + std::to_string(report.overall));
  for (const auto& [name, v] : report.sub_scores) {
    if (!in_range(v)) throw WorkerError("score out of range: " + name + " = " + std::to_string(v));
  }
  return report;
}

std::vector<std::string> WorkerClient::identify_foreground(const media::Frame& source_first,
                                                           const media::Frame& edited_first,
                                                           const std::string& clip_id) {
  Json result = call(routes_.vlm, Role::Vlm, request_id::describe(clip_id, "foreground_labels"),
                     {{"task", "foreground_labels"},
                      {"source_first", encode_frame(source_first)},
                      {"edited_first", encode_frame(edited_first)}});
  try {
    return result.at("labels").get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw WorkerError(std::string("malformed labels response: ") + e.what());
  }
}

std::string WorkerClient::extract_background_caption(const std::string& edit_prompt, const std::string& clip_id) {
  Json result = call(routes_.vlm, Role::Vlm, request_id::describe(clip_id, "background_caption"),
                     {{"task", "background_caption"}, {"edit_prompt", edit_prompt}});
  try {
    return result.at("caption").get<std::string>();
  } catch (const Json::exception& e) {
    throw WorkerError(std::string("malformed caption response: ") + e.what());
  }
}

bool WorkerClient::detect_camera_motion(const media::VideoClip& clip, const std::string& clip_id) {
  Json result = call(routes_.vlm, Role::Vlm, request_id::describe(clip_id, "camera_motion"),
                     {{"task", "camera_motion"}, {"frames", encode_clip(clip)}, {"fps", clip.fps().str()}});
  try {
    return result.at("moving").get<bool>();
  } catch (const Json::exception& e) {
    throw WorkerError(std::string("malformed camera-motion response: ") + e.what());
  }
}

std::string WorkerClient::judge(const std::string& prompt, const std::string& video_id,
                                const std::string& source_path, const std::string& edited_path) {
  Json result = call(routes_.judge, Role::Judge, request_id::judge(video_id),
                     {{"prompt", prompt}, {"video_id", video_id}, {"source", source_path}, {"edited", edited_path}});
  try {
    return result.at("text").get<std::string>();
  } catch (const Json::exception& e) {
    throw WorkerError(std::string("malformed judge response: ") + e.what());
  }
}

}  // namespace sparkle::workers
