#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evoshape {

/// RGB raster with real-valued intensities in [0,1].
///
/// Storage is row-major (row, col, channel). Every consumer of a flattened
/// image (the linear/MLP oracles, the wire protocol, weight files) relies on
/// this exact order.
class Image {
public:
  static constexpr int kChannels = 3;

  Image() = default;

  Image(int height, int width, double fill = 0.0)
      : height_(height), width_(width),
        data_(static_cast<std::size_t>(check_dims(height, width)), fill) {
    if (fill < 0.0 || fill > 1.0)
      throw std::invalid_argument("Image fill value outside [0,1]");
  }

  Image(int height, int width, std::vector<double> data)
      : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(check_dims(height, width)))
      throw std::invalid_argument("Image data length != height*width*3");
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!(data_[i] >= 0.0 && data_[i] <= 1.0))
        throw std::invalid_argument("Image intensity outside [0,1] at flat index " +
                                    std::to_string(i));
    }
  }

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return kChannels; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t flat_index(int row, int col, int channel) const {
    return (static_cast<std::size_t>(row) * width_ + col) * kChannels + channel;
  }

  double at(int row, int col, int channel) const { return data_[flat_index(row, col, channel)]; }
  double& at(int row, int col, int channel) { return data_[flat_index(row, col, channel)]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

private:
  static long long check_dims(int height, int width) {
    if (height <= 0 || width <= 0)
      throw std::invalid_argument("Image dimensions must be positive");
    return static_cast<long long>(height) * width * kChannels;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Max absolute per-entry deviation between two images of the same shape.
inline double linf_distance(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("linf_distance: image shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

} // namespace evoshape
