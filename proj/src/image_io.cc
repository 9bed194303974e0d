// Copyright 2026 The stereosynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stereosynth/image_io.h"

#include <png.h>

#include <bit>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <limits>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "stereosynth/error.h"

namespace stereosynth {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw Error("cannot open '" + path.string() + "': " + std::strerror(errno));
  return f;
}

// Decoded PNG after palette expansion, alpha stripping and low-bit-depth
// expansion. Samples are host-endian for 16-bit data.
struct PngRaster {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  int source_color_type = 0;
  int source_bit_depth = 0;
  std::vector<std::uint8_t> bytes;
  std::vector<png_bytep> rows;
};

struct PngErrorSink {
  char message[256] = {};
};

void png_error_handler(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof(sink->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

// Only trivially destructible locals live in the frames that can be unwound
// by longjmp; all owned storage belongs to `out`.
bool decode_png_raw(std::FILE* fp, PngRaster* out, PngErrorSink* sink) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, sink, png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  out->source_color_type = png_get_color_type(png, info);
  out->source_bit_depth = png_get_bit_depth(png, info);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_strip_alpha(png);
  if (out->source_bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
  png_read_update_info(png, info);

  out->width = static_cast<int>(png_get_image_width(png, info));
  out->height = static_cast<int>(png_get_image_height(png, info));
  out->channels = png_get_channels(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out->bytes.resize(rowbytes * static_cast<std::size_t>(out->height));
  out->rows.resize(static_cast<std::size_t>(out->height));
  for (int y = 0; y < out->height; ++y) out->rows[y] = out->bytes.data() + rowbytes * y;
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

PngRaster decode_png(const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "rb");
  PngRaster raster;
  PngErrorSink sink;
  if (!decode_png_raw(fp.get(), &raster, &sink)) {
    throw Error("cannot decode PNG '" + path.string() + "': " + (sink.message[0] ? sink.message : "libpng failure"));
  }
  if (raster.width < 1 || raster.height < 1) throw Error("zero-size image '" + path.string() + "'");
  return raster;
}

bool encode_png_raw(std::FILE* fp, int width, int height, int color_type, int bit_depth, png_bytep* rows,
                    PngErrorSink* sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, sink, png_error_handler, png_warning_handler);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16 && std::endian::native == std::endian::little) png_set_swap(png);
  png_write_image(png, rows);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void encode_png(const std::filesystem::path& path, int width, int height, int color_type, int bit_depth,
                std::span<const std::uint8_t> bytes) {
  const std::size_t rowbytes = bytes.size() / static_cast<std::size_t>(height);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[y] = const_cast<png_bytep>(bytes.data() + rowbytes * y);
  FilePtr fp = open_file(path, "wb");
  PngErrorSink sink;
  if (!encode_png_raw(fp.get(), width, height, color_type, bit_depth, rows.data(), &sink)) {
    throw Error("cannot encode PNG '" + path.string() + "': " + (sink.message[0] ? sink.message : "libpng failure"));
  }
  if (std::fflush(fp.get()) != 0) throw Error("write failed for '" + path.string() + "'");
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads whitespace-separated header tokens of a netpbm-family file, skipping
// '#' comments. Leaves `pos` on the single whitespace byte after the last token.
std::string next_token(const std::string& buf, std::size_t& pos) {
  while (pos < buf.size()) {
    if (buf[pos] == '#') {
      while (pos < buf.size() && buf[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  std::size_t start = pos;
  while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
  return buf.substr(start, pos - start);
}

int parse_dim(const std::string& token, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    long v = std::stol(token, &used);
    if (used != token.size() || v < 0 || v > (1L << 20)) throw std::invalid_argument(token);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw Error("malformed header in '" + path.string() + "': bad dimension '" + token + "'");
  }
}

ImagePlane read_ppm(const std::filesystem::path& path) {
  const std::string buf = read_all(path);
  std::size_t pos = 0;
  if (next_token(buf, pos) != "P6") throw Error("unsupported PPM variant in '" + path.string() + "'");
  const int width = parse_dim(next_token(buf, pos), path);
  const int height = parse_dim(next_token(buf, pos), path);
  const int maxval = parse_dim(next_token(buf, pos), path);
  if (width == 0 || height == 0) throw Error("zero-size image '" + path.string() + "'");
  if (maxval != 255) throw Error("unsupported bit depth for image plane (PPM maxval " + std::to_string(maxval) + ")");
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * height * 3;
  if (buf.size() < pos + n) throw Error("truncated PPM '" + path.string() + "'");
  return ImagePlane(width, height, std::vector<std::uint8_t>(buf.begin() + pos, buf.begin() + pos + n));
}

void write_ppm(const ImagePlane& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "P6\n" << image.width() << " " << image.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(image.data().data()), static_cast<std::streamsize>(image.data().size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

bool has_png_signature(const std::filesystem::path& path) {
  FilePtr fp = open_file(path, "rb");
  unsigned char sig[8] = {};
  const std::size_t got = std::fread(sig, 1, 8, fp.get());
  return got == 8 && png_sig_cmp(sig, 0, 8) == 0;
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

std::uint16_t load_u16(const std::uint8_t* p) {
  std::uint16_t v;
  std::memcpy(&v, p, 2);
  return v;
}

}  // namespace

ImagePlane read_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("missing file '" + path.string() + "'");
  if (!has_png_signature(path)) return read_ppm(path);

  PngRaster raster = decode_png(path);
  if (raster.bit_depth != 8) throw Error("unsupported bit depth for image plane");
  const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
  if (raster.channels == 3) return ImagePlane(raster.width, raster.height, std::move(raster.bytes));
  if (raster.channels != 1) throw Error("unsupported PNG channel layout in '" + path.string() + "'");
  std::vector<std::uint8_t> rgb(n * 3);
  for (std::size_t i = 0; i < n; ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = raster.bytes[i];
  return ImagePlane(raster.width, raster.height, std::move(rgb));
}

void write_image(const ImagePlane& image, const std::filesystem::path& path) {
  if (lower_extension(path) == ".ppm") {
    write_ppm(image, path);
    return;
  }
  encode_png(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, image.data());
}

DisparityMap read_disparity_kitti_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("missing file '" + path.string() + "'");
  PngRaster raster = decode_png(path);
  if (raster.source_color_type != PNG_COLOR_TYPE_GRAY) {
    throw Error("disparity PNG must be single-channel: '" + path.string() + "'");
  }
  if (raster.source_bit_depth != 16) throw Error("disparity PNG must be 16-bit: '" + path.string() + "'");
  const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
  std::vector<double> values(n);
  std::vector<std::uint8_t> valid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t raw = load_u16(raster.bytes.data() + 2 * i);
    valid[i] = raw != 0;
    values[i] = raw / 256.0;
  }
  return DisparityMap(raster.width, raster.height, std::move(values), std::move(valid));
}

void write_disparity_kitti_png(const DisparityMap& disparity, const std::filesystem::path& path) {
  const auto values = disparity.values();
  const auto valid = disparity.valid();
  std::vector<std::uint8_t> bytes(values.size() * 2);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint16_t raw = 0;
    if (valid[i]) {
      const double scaled = std::round(values[i] * 256.0);
      if (!(scaled <= 65535.0)) {
        throw Error("disparity " + std::to_string(values[i]) + " out of encodable range for 16-bit PNG");
      }
      raw = static_cast<std::uint16_t>(scaled);
    }
    std::memcpy(bytes.data() + 2 * i, &raw, 2);
  }
  encode_png(path, disparity.width(), disparity.height(), PNG_COLOR_TYPE_GRAY, 16, bytes);
}

FloatPlane read_pfm(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("missing file '" + path.string() + "'");
  const std::string buf = read_all(path);
  std::size_t pos = 0;
  const std::string magic = next_token(buf, pos);
  if (magic == "PF") throw Error("expected grayscale PFM");
  if (magic != "Pf") throw Error("malformed PFM header in '" + path.string() + "'");
  FloatPlane plane;
  plane.width = parse_dim(next_token(buf, pos), path);
  plane.height = parse_dim(next_token(buf, pos), path);
  if (plane.width == 0 || plane.height == 0) throw Error("zero-size PFM '" + path.string() + "'");
  const std::string scale_token = next_token(buf, pos);
  double scale = 0.0;
  try {
    scale = std::stod(scale_token);
  } catch (const std::exception&) {
    throw Error("malformed PFM scale line in '" + path.string() + "'");
  }
  if (scale == 0.0 || !std::isfinite(scale)) throw Error("malformed PFM scale line in '" + path.string() + "'");
  ++pos;
  const bool little = scale < 0.0;
  const std::size_t n = static_cast<std::size_t>(plane.width) * plane.height;
  if (buf.size() < pos + n * 4) throw Error("truncated PFM '" + path.string() + "'");
  const bool swap = little != (std::endian::native == std::endian::little);
  plane.values.resize(n);
  for (int fy = 0; fy < plane.height; ++fy) {
    const int y = plane.height - 1 - fy;
    for (int x = 0; x < plane.width; ++x) {
      std::uint32_t bits;
      std::memcpy(&bits, buf.data() + pos + (static_cast<std::size_t>(fy) * plane.width + x) * 4, 4);
      if (swap) bits = __builtin_bswap32(bits);
      const float v = std::bit_cast<float>(bits);
      if (std::isnan(v)) throw Error("NaN value in PFM '" + path.string() + "'");
      plane.values[static_cast<std::size_t>(y) * plane.width + x] = v;
    }
  }
  return plane;
}

void write_pfm(const FloatPlane& plane, const std::filesystem::path& path, bool little_endian) {
  if (plane.values.size() != static_cast<std::size_t>(plane.width) * plane.height || plane.width < 1 ||
      plane.height < 1) {
    throw Error("write_pfm: plane size does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << "Pf\n" << plane.width << " " << plane.height << "\n" << (little_endian ? "-1.0" : "1.0") << "\n";
  const bool swap = little_endian != (std::endian::native == std::endian::little);
  std::vector<char> row(static_cast<std::size_t>(plane.width) * 4);
  for (int fy = 0; fy < plane.height; ++fy) {
    const int y = plane.height - 1 - fy;
    for (int x = 0; x < plane.width; ++x) {
      auto bits = std::bit_cast<std::uint32_t>(plane.values[static_cast<std::size_t>(y) * plane.width + x]);
      if (swap) bits = __builtin_bswap32(bits);
      std::memcpy(row.data() + 4 * x, &bits, 4);
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

DisparityMap read_pfm_disparity(const std::filesystem::path& path) {
  FloatPlane plane = read_pfm(path);
  std::vector<double> values(plane.values.size());
  std::vector<std::uint8_t> valid(plane.values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const float v = plane.values[i];
    valid[i] = std::isfinite(v);
    values[i] = valid[i] ? v : 0.0;
  }
  return DisparityMap(plane.width, plane.height, std::move(values), std::move(valid));
}

void write_pfm_disparity(const DisparityMap& disparity, const std::filesystem::path& path) {
  FloatPlane plane{disparity.width(), disparity.height(), std::vector<float>(disparity.pixel_count())};
  for (std::size_t i = 0; i < plane.values.size(); ++i) {
    plane.values[i] = disparity.valid()[i] ? static_cast<float>(disparity.values()[i])
                                           : std::numeric_limits<float>::infinity();
  }
  write_pfm(plane, path);
}

RelativeDepthMap read_relative_depth(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("missing file '" + path.string() + "'");
  std::vector<double> values;
  int width = 0;
  int height = 0;
  if (has_png_signature(path)) {
    PngRaster raster = decode_png(path);
    if (raster.channels != 1) throw Error("depth PNG must be grayscale: '" + path.string() + "'");
    width = raster.width;
    height = raster.height;
    values.resize(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = raster.bit_depth == 16 ? load_u16(raster.bytes.data() + 2 * i) : raster.bytes[i];
    }
  } else {
    FloatPlane plane = read_pfm(path);
    width = plane.width;
    height = plane.height;
    values.assign(plane.values.begin(), plane.values.end());
  }
  return RelativeDepthMap::from_raw(width, height, values);
}

DisparityMap read_disparity(const std::filesystem::path& path) {
  if (lower_extension(path) == ".pfm") return read_pfm_disparity(path);
  return read_disparity_kitti_png(path);
}

void write_mask_png(const MaskPlane& mask, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(mask.bits().size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.bits()[i] ? 255 : 0;
  encode_png(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 8, bytes);
}

MaskPlane read_mask_png(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("missing file '" + path.string() + "'");
  PngRaster raster = decode_png(path);
  if (raster.channels != 1 || raster.bit_depth != 8) throw Error("mask PNG must be 8-bit grayscale: '" + path.string() + "'");
  std::vector<std::uint8_t> bits(raster.bytes.size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = raster.bytes[i] != 0;
  return MaskPlane(raster.width, raster.height, std::move(bits));
}

}  // namespace stereosynth
