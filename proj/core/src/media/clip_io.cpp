#include "sparkle/media/clip_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sparkle/error.hpp"
#include "sparkle/media/png.hpp"

namespace sparkle::media {

namespace fs = std::filesystem;

namespace {

std::uint8_t clamp_byte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

bool is_frame_file(const fs::path& p) {
  auto stem = p.stem().string();
  return p.extension() == ".png" && stem.size() == 6 &&
         std::all_of(stem.begin(), stem.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

VideoClip load_png_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_frame_file(entry.path())) files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no frames found in " + dir.string());
  std::sort(files.begin(), files.end());
  Rational fps = read_fps_sidecar(dir);
  std::vector<Frame> frames;
  frames.reserve(files.size());
  for (const auto& f : files) {
    frames.push_back(load_frame_png(f));
    if (!frames.back().same_size(frames.front())) {
      throw ValidationError("mixed frame dimensions in " + dir.string());
    }
  }
  return VideoClip(std::move(frames), fps);
}

void write_png_dir(const VideoClip& clip, const fs::path& dir) {
  ensure_directory(dir);
  for (std::size_t i = 0; i < clip.size(); ++i) write_frame_png(clip.frame(i), dir / frame_file_name(i));
  write_fps_sidecar(dir, clip.fps());
}

struct Y4mHeader {
  int width = 0;
  int height = 0;
  Rational fps{25, 1};
};

Y4mHeader parse_y4m_header(const std::string& line) {
  std::istringstream tokens(line);
  std::string magic;
  tokens >> magic;
  if (magic != "YUV4MPEG2") throw ValidationError("malformed y4m header: missing YUV4MPEG2 magic");
  Y4mHeader header;
  std::string tok;
  while (tokens >> tok) {
    char tag = tok[0];
    std::string value = tok.substr(1);
    try {
      switch (tag) {
        case 'W': header.width = std::stoi(value); break;
        case 'H': header.height = std::stoi(value); break;
        case 'F': header.fps = Rational::parse(value); break;
        case 'C':
          if (value.rfind("420", 0) != 0) throw ValidationError("unsupported y4m colorspace C" + value);
          break;
        case 'I':
          if (value != "p" && value != "?") throw ValidationError("interlaced y4m is not supported");
          break;
        default: break;
      }
    } catch (const std::logic_error&) {
      throw ValidationError("malformed y4m header token '" + tok + "'");
    }
  }
  if (header.width < 1 || header.height < 1) throw ValidationError("malformed y4m header: missing W/H");
  return header;
}

VideoClip load_y4m(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string header_line;
  if (!std::getline(in, header_line)) throw ValidationError("malformed y4m header: empty stream");
  Y4mHeader header = parse_y4m_header(header_line);
  const int w = header.width;
  const int h = header.height;
  const int cw = (w + 1) / 2;
  const int ch = (h + 1) / 2;
  const std::size_t luma_size = static_cast<std::size_t>(w) * h;
  const std::size_t chroma_size = static_cast<std::size_t>(cw) * ch;
  std::vector<std::uint8_t> plane(luma_size + 2 * chroma_size);
  std::vector<Frame> frames;
  std::string frame_line;
  while (std::getline(in, frame_line)) {
    if (frame_line.rfind("FRAME", 0) != 0) throw ValidationError("malformed y4m frame marker");
    in.read(reinterpret_cast<char*>(plane.data()), static_cast<std::streamsize>(plane.size()));
    if (in.gcount() != static_cast<std::streamsize>(plane.size())) throw ValidationError("truncated y4m frame");
    Frame frame(w, h);
    const std::uint8_t* ys = plane.data();
    const std::uint8_t* us = ys + luma_size;
    const std::uint8_t* vs = us + chroma_size;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        std::size_t ci = static_cast<std::size_t>(y / 2) * cw + x / 2;
        yuv_to_rgb(ys[static_cast<std::size_t>(y) * w + x], us[ci], vs[ci], &frame.at(x, y, 0));
      }
    }
    frames.push_back(std::move(frame));
  }
  if (frames.empty()) throw IoError("no frames found in " + path.string());
  return VideoClip(std::move(frames), header.fps);
}

void write_y4m(const VideoClip& clip, const fs::path& path) {
  if (path.has_parent_path()) ensure_directory(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const int w = clip.width();
  const int h = clip.height();
  const int cw = (w + 1) / 2;
  const int ch = (h + 1) / 2;
  out << "YUV4MPEG2 W" << w << " H" << h << " F" << clip.fps().num << ":" << clip.fps().den
      << " Ip A1:1 C420\n";
  std::vector<std::uint8_t> ys(static_cast<std::size_t>(w) * h);
  std::vector<std::uint8_t> us(static_cast<std::size_t>(cw) * ch);
  std::vector<std::uint8_t> vs(us.size());
  for (const auto& frame : clip.frames()) {
    for (int cy = 0; cy < ch; ++cy) {
      for (int cx = 0; cx < cw; ++cx) {
        double usum = 0, vsum = 0;
        int count = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            int x = 2 * cx + dx, y = 2 * cy + dy;
            if (x >= w || y >= h) continue;
            Yuv c = rgb_to_yuv(frame.at(x, y, 0), frame.at(x, y, 1), frame.at(x, y, 2));
            ys[static_cast<std::size_t>(y) * w + x] = clamp_byte(c.y);
            usum += c.u;
            vsum += c.v;
            ++count;
          }
        }
        us[static_cast<std::size_t>(cy) * cw + cx] = clamp_byte(usum / count);
        vs[static_cast<std::size_t>(cy) * cw + cx] = clamp_byte(vsum / count);
      }
    }
    out << "FRAME\n";
    out.write(reinterpret_cast<const char*>(ys.data()), static_cast<std::streamsize>(ys.size()));
    out.write(reinterpret_cast<const char*>(us.data()), static_cast<std::streamsize>(us.size()));
    out.write(reinterpret_cast<const char*>(vs.data()), static_cast<std::streamsize>(vs.size()));
  }
  if (!out) throw IoError("short write to " + path.string());
}

}  // namespace

ClipFormat parse_clip_format(const std::string& name) {
  if (name == "png-dir") return ClipFormat::PngDir;
  if (name == "y4m") return ClipFormat::Y4m;
  throw ValidationError("unknown clip format '" + name + "'");
}

std::string to_string(ClipFormat format) { return format == ClipFormat::PngDir ? "png-dir" : "y4m"; }

ClipFormat guess_clip_format(const fs::path& path) {
  return path.extension() == ".y4m" ? ClipFormat::Y4m : ClipFormat::PngDir;
}

VideoClip load_clip(const fs::path& path, ClipFormat format) {
  if (!fs::exists(path)) throw IoError("no such path: " + path.string());
  return format == ClipFormat::PngDir ? load_png_dir(path) : load_y4m(path);
}

void write_clip(const VideoClip& clip, const fs::path& path, ClipFormat format) {
  if (format == ClipFormat::PngDir) {
    write_png_dir(clip, path);
  } else {
    write_y4m(clip, path);
  }
}

Frame load_frame_png(const fs::path& path) {
  RasterImage image = decode_png(read_file_bytes(path));
  if (image.channels == 3) return Frame(image.width, image.height, std::move(image.data));
  std::vector<std::uint8_t> rgb(image.data.size() * 3);
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = image.data[i];
  }
  return Frame(image.width, image.height, std::move(rgb));
}

void write_frame_png(const Frame& frame, const fs::path& path) {
  write_file_bytes(path, encode_png_rgb(frame.width(), frame.height(), frame.pixels()));
}

std::string frame_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu.png", index);
  return buf;
}

void write_fps_sidecar(const fs::path& dir, Rational fps) {
  std::ofstream out(dir / "meta.txt", std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "meta.txt").string());
  out << "fps=" << fps.str() << "\n";
}

Rational read_fps_sidecar(const fs::path& dir) {
  std::ifstream in(dir / "meta.txt");
  if (!in) throw IoError("missing fps sidecar meta.txt in " + dir.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("fps=", 0) == 0) return Rational::parse(line.substr(4));
  }
  throw ValidationError("meta.txt in " + dir.string() + " has no fps= line");
}

Yuv rgb_to_yuv(double r, double g, double b) {
  return {0.299 * r + 0.587 * g + 0.114 * b,
          128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b,
          128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b};
}

void yuv_to_rgb(double y, double u, double v, std::uint8_t* rgb) {
  rgb[0] = clamp_byte(y + 1.402 * (v - 128.0));
  rgb[1] = clamp_byte(y - 0.344136 * (u - 128.0) - 0.714136 * (v - 128.0));
  rgb[2] = clamp_byte(y + 1.772 * (u - 128.0));
}

}  // namespace sparkle::media
