#include "sparkle/pipeline/manifest.hpp"

#include <fstream>

#include "sparkle/error.hpp"
#include "sparkle/hash.hpp"

namespace sparkle::pipeline {

namespace fs = std::filesystem;

std::string to_string(StageStatus status) {
  switch (status) {
    case StageStatus::Pending: return "pending";
    case StageStatus::Done: return "done";
    case StageStatus::Rejected: return "rejected";
    case StageStatus::Failed: return "failed";
  }
  return "pending";
}

StageStatus parse_stage_status(const std::string& text) {
  for (auto s : {StageStatus::Pending, StageStatus::Done, StageStatus::Rejected, StageStatus::Failed}) {
    if (to_string(s) == text) return s;
  }
  throw ValidationError("unknown stage status '" + text + "'");
}

bool ManifestRecord::rejected() const {
  for (auto s : stage_status) {
    if (s == StageStatus::Rejected) return true;
  }
  return false;
}

bool ManifestRecord::failed() const {
  for (auto s : stage_status) {
    if (s == StageStatus::Failed) return true;
  }
  return false;
}

int ManifestRecord::next_stage() const {
  for (int k = 1; k <= kStageCount; ++k) {
    if (status(k) != StageStatus::Done) return k;
  }
  return 0;
}

void ManifestRecord::check_invariants() const {
  bool gap = false;
  for (int k = 1; k <= kStageCount; ++k) {
    if (status(k) == StageStatus::Done && gap) {
      throw ValidationError(clip_id + ": stage " + std::to_string(k) + " done before an earlier stage");
    }
    if (status(k) != StageStatus::Done) gap = true;
  }
  if ((rejected() || failed()) && !failure) throw ValidationError(clip_id + ": rejected/failed without a reason");
}

nlohmann::json ManifestRecord::to_json() const {
  nlohmann::json status_j = nlohmann::json::object();
  for (int k = 1; k <= kStageCount; ++k) status_j[std::to_string(k)] = to_string(status(k));
  auto gates = nlohmann::json::array();
  for (const auto& g : gate_results) gates.push_back(g.to_json());
  nlohmann::json j = {{"clip_id", clip_id},
                      {"source_path", source_path},
                      {"source_format", source_format},
                      {"theme", theme},
                      {"subtheme", subtheme},
                      {"scene", scene},
                      {"edit_prompt", edit_prompt},
                      {"background_caption", background_caption},
                      {"foreground_labels", foreground_labels},
                      {"stage_status", std::move(status_j)},
                      {"failure", nullptr},
                      {"gate_results", std::move(gates)},
                      {"artifact_paths", artifact_paths},
                      {"seeds", seeds},
                      {"diagnostics", diagnostics}};
  if (!reference_edit_path.empty()) j["reference_edit_path"] = reference_edit_path;
  if (failure) j["failure"] = {{"stage", failure->stage}, {"reason", failure->reason}};
  return j;
}

ManifestRecord ManifestRecord::from_json(const nlohmann::json& j) {
  try {
    ManifestRecord r;
    r.clip_id = j.at("clip_id");
    if (r.clip_id.empty()) throw ValidationError("empty clip_id");
    r.source_path = j.value("source_path", "");
    r.source_format = j.value("source_format", "png-dir");
    r.reference_edit_path = j.value("reference_edit_path", "");
    r.theme = j.value("theme", "");
    r.subtheme = j.value("subtheme", "");
    r.scene = j.value("scene", "");
    r.edit_prompt = j.value("edit_prompt", "");
    r.background_caption = j.value("background_caption", "");
    r.foreground_labels = j.value("foreground_labels", std::vector<std::string>{});
    if (auto it = j.find("stage_status"); it != j.end()) {
      for (const auto& [key, value] : it->items()) {
        const int k = std::stoi(key);
        if (k < 1 || k > kStageCount) throw ValidationError("stage out of range: " + key);
        r.set_status(k, parse_stage_status(value));
      }
    }
    if (auto it = j.find("failure"); it != j.end() && !it->is_null()) {
      r.failure = Failure{it->at("stage"), it->at("reason")};
    }
    if (auto it = j.find("gate_results"); it != j.end()) {
      for (const auto& g : *it) r.gate_results.push_back(gate::GateResult::from_json(g));
    }
    r.artifact_paths = j.value("artifact_paths", std::map<std::string, std::string>{});
    r.seeds = j.value("seeds", std::map<std::string, std::uint64_t>{});
    r.diagnostics = j.value("diagnostics", nlohmann::json::object());
    r.check_invariants();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed manifest record: ") + e.what());
  }
}

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read manifest " + path.string());
  std::vector<ManifestRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      records.push_back(ManifestRecord::from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_manifest_atomic(const fs::path& path, const std::vector<ManifestRecord>& records) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    for (const auto& r : records) out << r.to_json().dump() << '\n';
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

std::uint64_t stage_seed(std::uint64_t master_seed, const std::string& clip_id, int stage) {
  return splitmix64(splitmix64(master_seed ^ fnv1a64(clip_id)) + static_cast<std::uint64_t>(stage));
}

}  // namespace sparkle::pipeline
