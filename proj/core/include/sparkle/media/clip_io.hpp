#pragma once

#include <filesystem>
#include <string>

#include "sparkle/media/frame.hpp"

namespace sparkle::media {

enum class ClipFormat { PngDir, Y4m };

/// "png-dir" / "y4m"; throws ValidationError on anything else.
ClipFormat parse_clip_format(const std::string& name);
std::string to_string(ClipFormat format);

/// Picks y4m for paths ending in ".y4m", png-dir otherwise.
ClipFormat guess_clip_format(const std::filesystem::path& path);

/// png-dir: NNNNNN.png frames plus meta.txt holding "fps=<num>/<den>".
/// y4m: YUV4MPEG2 C420, converted with BT.601 full-range equations.
VideoClip load_clip(const std::filesystem::path& path, ClipFormat format);
void write_clip(const VideoClip& clip, const std::filesystem::path& path, ClipFormat format);

Frame load_frame_png(const std::filesystem::path& path);
void write_frame_png(const Frame& frame, const std::filesystem::path& path);

/// Zero-padded frame file name, e.g. 000012.png.
std::string frame_file_name(std::size_t index);

void write_fps_sidecar(const std::filesystem::path& dir, Rational fps);
Rational read_fps_sidecar(const std::filesystem::path& dir);

/// BT.601 full-range conversions, exposed for tests and the y4m codec.
struct Yuv {
  double y, u, v;
};
Yuv rgb_to_yuv(double r, double g, double b);
void yuv_to_rgb(double y, double u, double v, std::uint8_t* rgb);

}  // namespace sparkle::media
