#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <vector>

#include "sparkle/bait/mask.hpp"
#include "sparkle/media/frame.hpp"
#include "sparkle/workers/types.hpp"

namespace sparkle::workers {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws WorkerError on characters outside the standard alphabet.
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// Frames travel as base64 PNG.
std::string encode_frame(const media::Frame& frame);
media::Frame decode_frame(const std::string& b64);
nlohmann::json encode_clip(const media::VideoClip& clip);

/// Masks travel as base64 PNG (1-bit); decoding accepts any gray/RGB PNG and
/// binarizes at 0.5 of full scale.
std::string encode_mask(const bait::BinaryMask& mask);
bait::BinaryMask decode_mask(const std::string& b64);

nlohmann::json box_to_json(const BoundingBox& box);
BoundingBox box_from_json(const nlohmann::json& j, std::size_t frame_index);

}  // namespace sparkle::workers
