#include <algorithm>
#include <cmath>
#include <fstream>

#include "sparkle/error.hpp"
#include "sparkle/media/png.hpp"
#include "sparkle/workers/transport.hpp"
#include "sparkle/workers/wire.hpp"

namespace sparkle::workers {

namespace {

media::Frame shift_horizontal(const media::Frame& in, long dx) {
  media::Frame out(in.width(), in.height());
  const long w = in.width();
  for (int y = 0; y < in.height(); ++y) {
    for (int x = 0; x < in.width(); ++x) {
      auto sx = static_cast<int>(((x - dx) % w + w) % w);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = in.at(sx, y, c);
    }
  }
  return out;
}

Json expand_edit(const Json& policy, const Json& payload) {
  const std::string name = policy.at("policy");
  media::Frame frame = decode_frame(payload.at("frame"));
  if (name == "identity") return {{"frame", encode_frame(frame)}};
  if (name == "tint") {
    const auto& rgb = policy.at("rgb");
    auto px = frame.pixels();
    for (std::size_t i = 0; i < px.size(); ++i) {
      px[i] = static_cast<std::uint8_t>((px[i] + rgb.at(i % 3).get<int>()) / 2);
    }
    return {{"frame", encode_frame(frame)}};
  }
  throw WorkerError("unknown edit policy '" + name + "'");
}

Json expand_animate(const Json& policy, const Json& payload) {
  const std::string name = policy.at("policy");
  media::Frame frame = decode_frame(payload.at("frame"));
  const auto n = payload.at("n_frames").get<std::size_t>();
  double delta = 0.0;
  if (name == "drift") {
    delta = policy.at("delta").get<double>();
  } else if (name != "static") {
    throw WorkerError("unknown animate policy '" + name + "'");
  }
  auto frames = Json::array();
  for (std::size_t k = 0; k < n; ++k) {
    frames.push_back(encode_frame(shift_horizontal(frame, std::lround(static_cast<double>(k) * delta))));
  }
  return {{"frames", std::move(frames)}};
}

Json expand_track(const Json& policy, const Json& payload) {
  const std::string name = policy.at("policy");
  if (name != "box-follow") throw WorkerError("unknown track policy '" + name + "'");
  const int width = payload.at("width");
  const int height = payload.at("height");
  const auto n = payload.at("n_frames").get<std::size_t>();
  const auto& anchor = payload.at("anchor");
  const auto a = anchor.at("frame_index").get<std::size_t>();
  const bool forward = payload.at("direction") == "forward";

  auto offset = [&](std::size_t t) -> std::pair<int, int> {
    auto it = policy.find("offsets");
    if (it == policy.end() || t >= it->size()) return {0, 0};
    return {(*it)[t].at(0).get<int>(), (*it)[t].at(1).get<int>()};
  };
  std::vector<std::size_t> dropout;
  if (auto it = policy.find("dropout"); it != policy.end()) dropout = it->get<std::vector<std::size_t>>();
  const bool soft = policy.value("soft", false);

  auto [ax, ay] = offset(a);
  auto masks = Json::array();
  for (std::size_t t = 0; t < n; ++t) {
    bait::BinaryMask mask(width, height);
    bool covered = forward ? t >= a : t <= a;
    if (covered && std::find(dropout.begin(), dropout.end(), t) == dropout.end()) {
      auto [dx, dy] = offset(t);
      mask.fill_rect(anchor.at("x0").get<int>() + dx - ax, anchor.at("y0").get<int>() + dy - ay,
                     anchor.at("x1").get<int>() + dx - ax, anchor.at("y1").get<int>() + dy - ay);
    }
    if (auto it = policy.find("blobs"); it != policy.end()) {
      for (const auto& blob : *it) {
        if (blob.at("frame").get<std::size_t>() != t) continue;
        const auto& b = blob.at("box");
        mask.fill_rect(b.at(0), b.at(1), b.at(2), b.at(3));
      }
    }
    if (soft) {
      std::vector<std::uint8_t> gray(mask.bits().size());
      for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask[i] ? 200 : 60;
      masks.push_back(base64_encode(media::encode_png_gray(width, height, gray, 8)));
    } else {
      masks.push_back(encode_mask(mask));
    }
  }
  return {{"masks", std::move(masks)}};
}

}  // namespace

ScriptedTransport::ScriptedTransport(Json fixture) : fixture_(std::move(fixture)) {
  if (!fixture_.is_object()) throw ValidationError("mock fixture must be a JSON object keyed by request id");
}

ScriptedTransport ScriptedTransport::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mock fixture " + path.string());
  try {
    return ScriptedTransport(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ValidationError("malformed mock fixture " + path.string() + ": " + e.what());
  }
}

const Json* ScriptedTransport::lookup(const std::string& id) const {
  if (auto it = fixture_.find(id); it != fixture_.end()) return &*it;
  const Json* best = nullptr;
  std::size_t best_len = 0;
  for (auto it = fixture_.begin(); it != fixture_.end(); ++it) {
    const std::string& key = it.key();
    if (key.empty() || key.back() != '*') continue;
    std::string_view prefix(key.data(), key.size() - 1);
    if (id.starts_with(prefix) && (best == nullptr || prefix.size() > best_len)) {
      best = &it.value();
      best_len = prefix.size();
    }
  }
  return best;
}

Json ScriptedTransport::post(const std::string& route, const Json& envelope) {
  const std::string id = envelope.at("id");
  {
    std::lock_guard lock(mutex_);
    ++calls_[route];
  }
  const Json* entry = lookup(id);
  if (entry == nullptr) return {{"id", id}, {"error", "no scripted response for " + id}};
  if (entry->is_object() && entry->contains("error")) return {{"id", id}, {"error", entry->at("error")}};

  const Json& payload = envelope.at("payload");
  Json result = *entry;
  try {
    if (entry->is_object() && entry->contains("policy")) {
      if (route == "/edit") {
        result = expand_edit(*entry, payload);
      } else if (route == "/animate") {
        result = expand_animate(*entry, payload);
      } else if (route == "/track") {
        result = expand_track(*entry, payload);
      } else {
        throw WorkerError("no policies for route " + route);
      }
    }
  } catch (const Json::exception& e) {
    throw WorkerError("mock policy for " + id + " is malformed: " + e.what());
  }
  return {{"id", id}, {"result", std::move(result)}};
}

int ScriptedTransport::call_count() const {
  std::lock_guard lock(mutex_);
  int total = 0;
  for (const auto& [route, n] : calls_) total += n;
  return total;
}

std::map<std::string, int> ScriptedTransport::calls_by_route() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

void ScriptedTransport::reset_counters() {
  std::lock_guard lock(mutex_);
  calls_.clear();
}

}  // namespace sparkle::workers
