#pragma once

#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

#include "evoshape/image.hpp"

namespace evoshape {

namespace detail {

struct FileHandle {
  std::FILE* f = nullptr;
  explicit FileHandle(const std::string& path, const char* mode) : f(std::fopen(path.c_str(), mode)) {}
  ~FileHandle() {
    if (f) std::fclose(f);
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
};

} // namespace detail

/// Quantizes an intensity to 8 bits: round-half-up of v*255.
inline std::uint8_t quantize_intensity(double v) {
  const int b = static_cast<int>(std::floor(v * 255.0 + 0.5));
  return static_cast<std::uint8_t>(b < 0 ? 0 : (b > 255 ? 255 : b));
}

/// Writes an 8-bit RGB PNG. Quantization is the only loss: a decode of the
/// written file differs from the source image by at most 1/510 per channel.
inline void export_png(const Image& image, const std::string& path) {
  if (image.empty()) throw std::invalid_argument("export_png: empty image");
  detail::FileHandle fh(path, "wb");
  if (!fh.f) throw std::runtime_error("export_png: cannot open " + path + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("export_png: png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("export_png: png_create_info_struct failed");
  }
  std::vector<std::uint8_t> bytes(image.size());
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height()));
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("export_png: libpng failure writing " + path);
  }
  png_init_io(png, fh.f);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (std::size_t i = 0; i < image.size(); ++i)
    bytes[i] = quantize_intensity(image.data()[i]);
  const std::size_t stride = static_cast<std::size_t>(image.width()) * Image::kChannels;
  for (int r = 0; r < image.height(); ++r) rows[static_cast<std::size_t>(r)] = bytes.data() + r * stride;
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
}

/// Reads any PNG as RGB with intensities byte/255; palette, grayscale,
/// sub-8-bit and 16-bit inputs are expanded/stripped to 8-bit RGB and an
/// alpha channel is dropped.
inline Image import_png(const std::string& path) {
  detail::FileHandle fh(path, "rb");
  if (!fh.f) throw std::runtime_error("import_png: cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("import_png: png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("import_png: png_create_info_struct failed");
  }
  std::vector<std::uint8_t> bytes;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("import_png: not a readable PNG: " + path);
  }
  png_init_io(png, fh.f);
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  const png_byte bit_depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (bit_depth == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int height = static_cast<int>(png_get_image_height(png, info));
  const int width = static_cast<int>(png_get_image_width(png, info));
  const std::size_t stride = png_get_rowbytes(png, info);
  if (stride != static_cast<std::size_t>(width) * Image::kChannels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("import_png: unexpected row stride in " + path);
  }
  bytes.resize(static_cast<std::size_t>(height) * stride);
  rows.resize(static_cast<std::size_t>(height));
  for (int r = 0; r < height; ++r) rows[static_cast<std::size_t>(r)] = bytes.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  std::vector<double> data(bytes.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = bytes[i] / 255.0;
  return Image(height, width, std::move(data));
}

} // namespace evoshape
