#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sparkle::media {

/// Decoded 8-bit image with 1 (gray) or 3 (RGB) channels.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> data;
};

std::vector<std::uint8_t> encode_png_rgb(int width, int height, std::span<const std::uint8_t> rgb);

/// `gray` holds one byte per pixel. With bit_depth 1, nonzero bytes become set bits.
std::vector<std::uint8_t> encode_png_gray(int width, int height, std::span<const std::uint8_t> gray,
                                          int bit_depth = 8);

/// Decodes any PNG to 8-bit gray or RGB. Alpha is dropped; sub-byte gray is
/// rescaled to 0..255; palette images expand to RGB.
RasterImage decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace sparkle::media
