#include "sparkle/workers/transport.hpp"

#include "sparkle/error.hpp"
#include "sparkle/workers/types.hpp"

namespace sparkle::workers {

std::string route_for(Role role) {
  switch (role) {
    case Role::Grounder: return "/ground";
    case Role::Editor: return "/edit";
    case Role::Animator: return "/animate";
    case Role::Tracker: return "/track";
    case Role::Scorer: return "/score";
    case Role::Vlm: return "/describe";
    case Role::Judge: return "/judge";
  }
  return "/";
}

std::string to_string(Role role) {
  switch (role) {
    case Role::Grounder: return "grounder";
    case Role::Editor: return "editor";
    case Role::Animator: return "animator";
    case Role::Tracker: return "tracker";
    case Role::Scorer: return "scorer";
    case Role::Vlm: return "vlm";
    case Role::Judge: return "judge";
  }
  return "unknown";
}

Role parse_role(const std::string& name) {
  for (Role r : {Role::Grounder, Role::Editor, Role::Animator, Role::Tracker, Role::Scorer, Role::Vlm, Role::Judge}) {
    if (to_string(r) == name) return r;
  }
  throw ValidationError("unknown worker role '" + name + "'");
}

std::string to_string(TrackDirection direction) {
  return direction == TrackDirection::Forward ? "forward" : "backward";
}

Json make_envelope(const std::string& id, Json payload) { return {{"id", id}, {"payload", std::move(payload)}}; }

Json unwrap_result(const Json& response, const std::string& expected_id) {
  if (!response.is_object()) throw WorkerError("malformed response envelope for " + expected_id);
  if (auto it = response.find("id"); it != response.end() && it->is_string() && *it != expected_id) {
    throw WorkerError("response id mismatch: expected " + expected_id + ", got " + it->get<std::string>());
  }
  if (auto it = response.find("error"); it != response.end()) {
    throw WorkerError("worker error for " + expected_id + ": " + (it->is_string() ? it->get<std::string>() : it->dump()));
  }
  auto it = response.find("result");
  if (it == response.end()) throw WorkerError("malformed response envelope for " + expected_id + ": no result");
  return *it;
}

}  // namespace sparkle::workers
