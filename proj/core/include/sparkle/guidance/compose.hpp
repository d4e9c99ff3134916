#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <vector>

#include "sparkle/bait/mask.hpp"
#include "sparkle/guidance/canny.hpp"
#include "sparkle/media/frame.hpp"

namespace sparkle::guidance {

/// Composited edges plus, per frame, which layer each pixel came from
/// (mask bit set = foreground-edge, i.e. taken from the source video).
struct GuidanceVideo {
  std::vector<EdgeMap> frames;
  std::vector<bait::BinaryMask> provenance;

  std::size_t size() const { return frames.size(); }
};

/// output(p, t) = src(p, t) where mask(p, t), else bg(p, t). The mask is dilated
/// by `dilation` pixels first. Length is min(src, bg); the mask must cover it.
GuidanceVideo compose_guidance(const std::vector<EdgeMap>& src_edges, const std::vector<EdgeMap>& bg_edges,
                               const bait::MaskVideo& mask, int dilation = 0);

/// White-on-black RGB frames for the controlled generator.
media::VideoClip render_guidance(const GuidanceVideo& guidance, media::Rational fps);

/// Alternating run lengths per frame, row-major, starting with background-edge.
nlohmann::json provenance_to_json(const GuidanceVideo& guidance);
std::vector<bait::BinaryMask> provenance_from_json(const nlohmann::json& j);

/// 8-bit gray png-dir (edge = 255) with meta.txt, plus provenance.json.
void write_guidance(const GuidanceVideo& guidance, media::Rational fps, const std::filesystem::path& dir);

}  // namespace sparkle::guidance
