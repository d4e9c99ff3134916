#include "sparkle/media/png.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>

#include "sparkle/error.hpp"

namespace sparkle::media {

namespace {

struct ReadCursor {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->size) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, cursor->data + cursor->offset, length);
  cursor->offset += length;
}

void write_to_memory(png_structp png, png_bytep in, png_size_t length) {
  auto* sink = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  sink->insert(sink->end(), in, in + length);
}

void flush_noop(png_structp) {}

// libpng reports errors by longjmp; these helpers keep only trivially
// destructible state between setjmp and the jump.
bool encode_impl(std::vector<std::uint8_t>* sink, int width, int height, int color_type, int bit_depth,
                 png_bytepp rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, sink, write_to_memory, flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

struct DecodeHeader {
  png_uint_32 width;
  png_uint_32 height;
  int channels;
};

bool decode_header(png_structp png, png_infop info, ReadCursor* cursor, DecodeHeader* header) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_read_fn(png, cursor, read_from_memory);
  png_read_info(png, info);
  int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);
  header->width = png_get_image_width(png, info);
  header->height = png_get_image_height(png, info);
  header->channels = png_get_channels(png, info);
  return true;
}

bool decode_rows(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, info);
  return true;
}

std::vector<std::uint8_t> encode(int width, int height, int color_type, int bit_depth,
                                 std::vector<std::vector<std::uint8_t>>& row_storage) {
  std::vector<png_bytep> rows(row_storage.size());
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = row_storage[y].data();
  std::vector<std::uint8_t> out;
  if (!encode_impl(&out, width, height, color_type, bit_depth, rows.data())) {
    throw IoError("PNG encoding failed");
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png_rgb(int width, int height, std::span<const std::uint8_t> rgb) {
  if (width < 1 || height < 1 || rgb.size() != static_cast<std::size_t>(width) * height * 3) {
    throw ValidationError("RGB buffer does not match PNG dimensions");
  }
  std::vector<std::vector<std::uint8_t>> rows(height);
  for (int y = 0; y < height; ++y) {
    auto begin = rgb.begin() + static_cast<std::ptrdiff_t>(y) * width * 3;
    rows[y].assign(begin, begin + width * 3);
  }
  return encode(width, height, PNG_COLOR_TYPE_RGB, 8, rows);
}

std::vector<std::uint8_t> encode_png_gray(int width, int height, std::span<const std::uint8_t> gray,
                                          int bit_depth) {
  if (width < 1 || height < 1 || gray.size() != static_cast<std::size_t>(width) * height) {
    throw ValidationError("gray buffer does not match PNG dimensions");
  }
  if (bit_depth != 1 && bit_depth != 8) throw ValidationError("unsupported gray bit depth");
  std::vector<std::vector<std::uint8_t>> rows(height);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* src = gray.data() + static_cast<std::size_t>(y) * width;
    if (bit_depth == 8) {
      rows[y].assign(src, src + width);
    } else {
      rows[y].assign((width + 7) / 8, 0);
      for (int x = 0; x < width; ++x) {
        if (src[x] != 0) rows[y][x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
      }
    }
  }
  return encode(width, height, PNG_COLOR_TYPE_GRAY, bit_depth, rows);
}

RasterImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) throw IoError("not a PNG stream");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw IoError("PNG decoder allocation failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("PNG decoder allocation failed");
  }
  ReadCursor cursor{bytes.data(), bytes.size(), 0};
  DecodeHeader header{};
  if (!decode_header(png, info, &cursor, &header)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("malformed PNG header");
  }
  RasterImage image;
  image.width = static_cast<int>(header.width);
  image.height = static_cast<int>(header.height);
  image.channels = header.channels;
  image.data.resize(static_cast<std::size_t>(image.width) * image.height * image.channels);
  std::vector<png_bytep> rows(image.height);
  for (int y = 0; y < image.height; ++y) {
    rows[y] = image.data.data() + static_cast<std::size_t>(y) * image.width * image.channels;
  }
  bool ok = decode_rows(png, info, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok) throw IoError("malformed PNG data");
  if (image.channels != 1 && image.channels != 3) throw IoError("unsupported PNG channel layout");
  return image;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace sparkle::media
