#include "sparkle/workers/wire.hpp"

#include "sparkle/error.hpp"
#include "sparkle/media/png.hpp"

namespace sparkle::workers {

std::string encode_frame(const media::Frame& frame) {
  return base64_encode(media::encode_png_rgb(frame.width(), frame.height(), frame.pixels()));
}

media::Frame decode_frame(const std::string& b64) {
  media::RasterImage image;
  try {
    image = media::decode_png(base64_decode(b64));
  } catch (const IoError& e) {
    throw WorkerError(std::string("undecodable frame: ") + e.what());
  }
  if (image.channels == 3) return media::Frame(image.width, image.height, std::move(image.data));
  std::vector<std::uint8_t> rgb(image.data.size() * 3);
  for (std::size_t i = 0; i < image.data.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = image.data[i];
  return media::Frame(image.width, image.height, std::move(rgb));
}

nlohmann::json encode_clip(const media::VideoClip& clip) {
  auto frames = nlohmann::json::array();
  for (const auto& f : clip.frames()) frames.push_back(encode_frame(f));
  return frames;
}

std::string encode_mask(const bait::BinaryMask& mask) {
  return base64_encode(media::encode_png_gray(mask.width(), mask.height(), mask.bits(), 1));
}

bait::BinaryMask decode_mask(const std::string& b64) {
  media::RasterImage image;
  try {
    image = media::decode_png(base64_decode(b64));
  } catch (const IoError& e) {
    throw WorkerError(std::string("undecodable mask: ") + e.what());
  }
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(image.width) * image.height);
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = image.data[i * image.channels];
  return bait::binarize(image.width, image.height, gray);
}

nlohmann::json box_to_json(const BoundingBox& box) {
  return {{"label", box.label}, {"x0", box.x0}, {"y0", box.y0}, {"x1", box.x1}, {"y1", box.y1},
          {"frame_index", box.frame_index}};
}

BoundingBox box_from_json(const nlohmann::json& j, std::size_t frame_index) {
  try {
    BoundingBox box;
    box.label = j.at("label").get<std::string>();
    box.x0 = j.at("x0").get<int>();
    box.y0 = j.at("y0").get<int>();
    box.x1 = j.at("x1").get<int>();
    box.y1 = j.at("y1").get<int>();
    box.frame_index = frame_index;
    return box;
  } catch (const nlohmann::json::exception& e) {
    throw WorkerError(std::string("malformed box: ") + e.what());
  }
}

}  // namespace sparkle::workers
