#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "sparkle/error.hpp"
#include "sparkle/media/png.hpp"
#include "sparkle/motion/flow.hpp"

namespace sparkle::motion {

static_assert(std::endian::native == std::endian::little, ".flo codec assumes a little-endian host");

namespace {

constexpr float kFloMagic = 202021.25f;

template <typename T>
T read_le(const std::uint8_t* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return value;
}

}  // namespace

FlowField read_flow_file(const std::filesystem::path& path) {
  auto bytes = media::read_file_bytes(path);
  if (bytes.size() < 4 || read_le<float>(bytes.data()) != kFloMagic) {
    throw ValidationError("not a .flo file: " + path.string());
  }
  if (bytes.size() < 12) throw ValidationError("truncated .flo header: " + path.string());
  auto width = read_le<std::int32_t>(bytes.data() + 4);
  auto height = read_le<std::int32_t>(bytes.data() + 8);
  if (width < 1 || height < 1 || width > (1 << 16) || height > (1 << 16)) {
    throw ValidationError("implausible .flo dimensions in " + path.string());
  }
  std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() < 12 + count * 8) throw ValidationError("truncated .flo payload: " + path.string());
  std::vector<FlowVector> vectors(count);
  for (std::size_t i = 0; i < count; ++i) {
    vectors[i].u = read_le<float>(bytes.data() + 12 + 8 * i);
    vectors[i].v = read_le<float>(bytes.data() + 16 + 8 * i);
  }
  return FlowField(width, height, std::move(vectors));
}

void write_flow_file(const FlowField& flow, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(12 + flow.vectors().size() * 8);
  std::int32_t w = flow.width(), h = flow.height();
  std::memcpy(bytes.data(), &kFloMagic, 4);
  std::memcpy(bytes.data() + 4, &w, 4);
  std::memcpy(bytes.data() + 8, &h, 4);
  for (std::size_t i = 0; i < flow.vectors().size(); ++i) {
    std::memcpy(bytes.data() + 12 + 8 * i, &flow.vectors()[i].u, 4);
    std::memcpy(bytes.data() + 16 + 8 * i, &flow.vectors()[i].v, 4);
  }
  media::write_file_bytes(path, bytes);
}

}  // namespace sparkle::motion
