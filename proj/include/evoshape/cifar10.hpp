#pragma once

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evoshape/image.hpp"

namespace evoshape {

struct LabeledImage {
  Image image;
  int label = 0;
};

inline constexpr int kCifarDim = 32;
inline constexpr int kCifarClasses = 10;
inline constexpr std::size_t kCifarRecordBytes = 3073; // label + 3 x 1024 channel planes

/// Parses an in-memory CIFAR-10 binary batch: 3073-byte records of one label
/// byte followed by the red, green and blue 32x32 planes (row-major).
/// Intensities are byte/255.
inline std::vector<LabeledImage> parse_cifar10_batch(const std::vector<std::uint8_t>& bytes,
                                                     const std::string& origin = "<memory>") {
  if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0)
    throw std::runtime_error("CIFAR-10 batch " + origin + ": size " +
                             std::to_string(bytes.size()) + " is not a positive multiple of " +
                             std::to_string(kCifarRecordBytes));
  const std::size_t count = bytes.size() / kCifarRecordBytes;
  std::vector<LabeledImage> out;
  out.reserve(count);
  constexpr std::size_t plane = static_cast<std::size_t>(kCifarDim) * kCifarDim;
  for (std::size_t rec = 0; rec < count; ++rec) {
    const std::uint8_t* p = bytes.data() + rec * kCifarRecordBytes;
    const int label = p[0];
    if (label >= kCifarClasses)
      throw std::runtime_error("CIFAR-10 batch " + origin + ": record " + std::to_string(rec) +
                               " has label byte " + std::to_string(label) + " > 9");
    std::vector<double> data(plane * Image::kChannels);
    for (int row = 0; row < kCifarDim; ++row)
      for (int col = 0; col < kCifarDim; ++col) {
        const std::size_t pix = static_cast<std::size_t>(row) * kCifarDim + col;
        for (int ch = 0; ch < Image::kChannels; ++ch)
          data[pix * Image::kChannels + ch] = p[1 + ch * plane + pix] / 255.0;
      }
    out.push_back({Image(kCifarDim, kCifarDim, std::move(data)), label});
  }
  return out;
}

inline std::vector<LabeledImage> load_cifar10_batch(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open CIFAR-10 batch " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_cifar10_batch(bytes, path);
}

} // namespace evoshape
