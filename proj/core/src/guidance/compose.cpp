#include "sparkle/guidance/compose.hpp"

#include <algorithm>

#include "sparkle/error.hpp"
#include "sparkle/media/clip_io.hpp"
#include "sparkle/media/png.hpp"

namespace sparkle::guidance {

namespace fs = std::filesystem;

GuidanceVideo compose_guidance(const std::vector<EdgeMap>& src_edges, const std::vector<EdgeMap>& bg_edges,
                               const bait::MaskVideo& mask, int dilation) {
  if (dilation < 0) throw ValidationError("mask dilation must be >= 0");
  const std::size_t n = std::min(src_edges.size(), bg_edges.size());
  if (n == 0) throw ValidationError("compose_guidance needs at least one frame");
  if (mask.size() < n) {
    throw ValidationError("mask covers " + std::to_string(mask.size()) + " frames, guidance needs " +
                          std::to_string(n));
  }
  const int w = mask.width(), h = mask.height();
  for (std::size_t t = 0; t < n; ++t) {
    const auto& s = src_edges[t];
    const auto& b = bg_edges[t];
    if (s.width() != w || s.height() != h || b.width() != w || b.height() != h) {
      throw ValidationError("compose_guidance: dimension mismatch at frame " + std::to_string(t));
    }
  }
  const bait::MaskVideo selector = dilation > 0 ? bait::dilate(mask, dilation) : mask;

  GuidanceVideo out;
  out.frames.reserve(n);
  out.provenance.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto& sel = selector[t];
    std::vector<std::uint8_t> bits(sel.bits().size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = sel[i] ? src_edges[t][i] : bg_edges[t][i];
    out.frames.emplace_back(w, h, std::move(bits));
    out.provenance.push_back(sel);
  }
  return out;
}

media::VideoClip render_guidance(const GuidanceVideo& guidance, media::Rational fps) {
  std::vector<media::Frame> frames;
  frames.reserve(guidance.size());
  for (const auto& e : guidance.frames) {
    std::vector<std::uint8_t> rgb(e.bits().size() * 3);
    for (std::size_t i = 0; i < e.bits().size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = e[i] ? 255 : 0;
    frames.emplace_back(e.width(), e.height(), std::move(rgb));
  }
  return media::VideoClip(std::move(frames), fps);
}

nlohmann::json provenance_to_json(const GuidanceVideo& guidance) {
  if (guidance.provenance.empty()) throw ValidationError("empty guidance");
  auto frames = nlohmann::json::array();
  for (const auto& m : guidance.provenance) {
    std::vector<std::size_t> runs;
    bool current = false;
    std::size_t len = 0;
    for (std::size_t i = 0; i < m.bits().size(); ++i) {
      if (m[i] != current) {
        runs.push_back(len);
        current = m[i];
        len = 0;
      }
      ++len;
    }
    runs.push_back(len);
    frames.push_back(runs);
  }
  return {{"width", guidance.provenance.front().width()},
          {"height", guidance.provenance.front().height()},
          {"encoding", "row-major alternating runs, first run background-edge"},
          {"frames", std::move(frames)}};
}

std::vector<bait::BinaryMask> provenance_from_json(const nlohmann::json& j) {
  try {
    const int w = j.at("width"), h = j.at("height");
    const std::size_t pixels = static_cast<std::size_t>(w) * h;
    std::vector<bait::BinaryMask> out;
    for (const auto& runs : j.at("frames")) {
      std::vector<std::uint8_t> bits;
      bits.reserve(pixels);
      bool fg = false;
      for (const auto& r : runs) {
        bits.insert(bits.end(), r.get<std::size_t>(), fg ? 1 : 0);
        fg = !fg;
      }
      if (bits.size() != pixels) throw ValidationError("provenance runs do not cover the frame");
      out.emplace_back(w, h, std::move(bits));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed provenance: ") + e.what());
  }
}

void write_guidance(const GuidanceVideo& guidance, media::Rational fps, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
  for (std::size_t t = 0; t < guidance.size(); ++t) {
    const auto& e = guidance.frames[t];
    std::vector<std::uint8_t> gray(e.bits().size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = e[i] ? 255 : 0;
    media::write_file_bytes(dir / media::frame_file_name(t), media::encode_png_gray(e.width(), e.height(), gray, 8));
  }
  media::write_fps_sidecar(dir, fps);
  const std::string text = provenance_to_json(guidance).dump() + "\n";
  media::write_file_bytes(dir / "provenance.json", std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace sparkle::guidance
