#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"

namespace evoshape {

/// Maps a genome entry v in [0,1] to a pixel index: round-half-up of v*s,
/// clamped into [0, s-1] (v = 1.0 would otherwise land one past the end).
inline int scaled_round(double v, int s) {
  const int r = static_cast<int>(std::floor(v * s + 0.5));
  return std::clamp(r, 0, s - 1);
}

/// Circle radius in pixels: round-half-up of v*r with the radius bound r kept
/// real. v in [0,1] already caps the result at round(r), so no clamp applies.
inline int scaled_radius(double v, double r) {
  return static_cast<int>(std::floor(v * r + 0.5));
}

/// Alpha-over blend of one channel.
inline double blend(double under, double color, double alpha) {
  return (1.0 - alpha) * under + alpha * color;
}

/// A rasterized shape: the set of covered pixel coordinates plus fill color
/// and transparency. Coordinates are (row, col) and must lie within the image
/// the shape was built for.
struct RasterShape {
  std::vector<std::pair<int, int>> region;
  std::array<double, 3> color{0.0, 0.0, 0.0};
  double alpha = 0.0;
};

/// Blends a shape over the image: covered pixels become
/// (1-alpha)*under + alpha*color per channel, everything else is untouched.
inline Image composite(const Image& image, const RasterShape& shape) {
  Image out = image;
  for (const auto& [row, col] : shape.region) {
    if (row < 0 || row >= image.height() || col < 0 || col >= image.width())
      throw std::invalid_argument("composite: shape region outside image bounds");
    for (int ch = 0; ch < Image::kChannels; ++ch) {
      double& v = out.at(row, col, ch);
      v = blend(v, shape.color[ch], shape.alpha);
    }
  }
  return out;
}

/// One entry of the L-infinity projection:
/// min(max(adv, orig-eps, 0), orig+eps, 1).
inline double project_linf_value(double adv, double orig, double epsilon) {
  const double lo = std::max(orig - epsilon, 0.0);
  const double hi = std::min(orig + epsilon, 1.0);
  return std::clamp(adv, lo, hi);
}

/// Elementwise projection onto the L-infinity ball of radius epsilon around x,
/// intersected with [0,1].
inline Image project_linf(const Image& x_adv, const Image& x, double epsilon) {
  if (!x_adv.same_shape(x))
    throw std::invalid_argument("project_linf: image shape mismatch");
  Image out = x_adv;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = project_linf_value(out.data()[i], x.data()[i], epsilon);
  return out;
}

namespace detail {

/// Pixel membership for a circle with integer center and radius:
/// (row-cr)^2 + (col-cc)^2 <= radius^2, boundary inclusive.
inline bool in_circle(int row, int col, int center_row, int center_col, int radius) {
  const long long dr = row - center_row;
  const long long dc = col - center_col;
  return dr * dr + dc * dc <= static_cast<long long>(radius) * radius;
}

inline long long edge_function(int ar, int ac, int br, int bc, int pr, int pc) {
  return static_cast<long long>(bc - ac) * (pr - ar) -
         static_cast<long long>(br - ar) * (pc - ac);
}

/// Sign-of-edge-function triangle test with zero treated as inside, limited
/// to the vertex bounding box so degenerate triangles (equal or collinear
/// vertices) cover at most their own segment of pixels.
inline bool in_triangle(int row, int col, const std::array<std::pair<int, int>, 3>& v) {
  const auto [minr, maxr] = std::minmax({v[0].first, v[1].first, v[2].first});
  const auto [minc, maxc] = std::minmax({v[0].second, v[1].second, v[2].second});
  if (row < minr || row > maxr || col < minc || col > maxc) return false;
  const long long e0 = edge_function(v[0].first, v[0].second, v[1].first, v[1].second, row, col);
  const long long e1 = edge_function(v[1].first, v[1].second, v[2].first, v[2].second, row, col);
  const long long e2 = edge_function(v[2].first, v[2].second, v[0].first, v[0].second, row, col);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

inline std::array<double, 3> shape_color(const Genome& g, int i, int first) {
  return {g.at(i, first), g.at(i, first + 1), g.at(i, first + 2)};
}

} // namespace detail

/// Rasterizes circle i of a circle genome for an h x w image. The center is
/// (y_i1 against the height axis, y_i0 against the width axis); the radius is
/// y_i2 scaled by the bound r = (h+w)/beta.
inline RasterShape circle_shape(const Genome& genome, int i, int height, int width, double beta) {
  if (genome.kind() != ShapeKind::Circle)
    throw std::invalid_argument("circle_shape: genome kind is not Circle");
  const int center_row = scaled_round(genome.at(i, 1), height);
  const int center_col = scaled_round(genome.at(i, 0), width);
  const double radius_bound = (height + width) / beta;
  const int radius = scaled_radius(genome.at(i, 2), radius_bound);

  RasterShape shape;
  shape.color = detail::shape_color(genome, i, 3);
  shape.alpha = genome.at(i, 6);
  const int row_lo = std::max(center_row - radius, 0);
  const int row_hi = std::min(center_row + radius, height - 1);
  const int col_lo = std::max(center_col - radius, 0);
  const int col_hi = std::min(center_col + radius, width - 1);
  for (int row = row_lo; row <= row_hi; ++row)
    for (int col = col_lo; col <= col_hi; ++col)
      if (detail::in_circle(row, col, center_row, center_col, radius))
        shape.region.emplace_back(row, col);
  return shape;
}

/// Rasterizes triangle i: vertices (y_i0*h, y_i1*w), (y_i2*h, y_i3*w),
/// (y_i4*h, y_i5*w), first coordinate on the height axis.
inline RasterShape triangle_shape(const Genome& genome, int i, int height, int width) {
  if (genome.kind() != ShapeKind::Triangle)
    throw std::invalid_argument("triangle_shape: genome kind is not Triangle");
  const std::array<std::pair<int, int>, 3> v{{
      {scaled_round(genome.at(i, 0), height), scaled_round(genome.at(i, 1), width)},
      {scaled_round(genome.at(i, 2), height), scaled_round(genome.at(i, 3), width)},
      {scaled_round(genome.at(i, 4), height), scaled_round(genome.at(i, 5), width)},
  }};

  RasterShape shape;
  shape.color = detail::shape_color(genome, i, 6);
  shape.alpha = genome.at(i, 9);
  const auto [row_lo, row_hi] = std::minmax({v[0].first, v[1].first, v[2].first});
  const auto [col_lo, col_hi] = std::minmax({v[0].second, v[1].second, v[2].second});
  for (int row = row_lo; row <= row_hi; ++row)
    for (int col = col_lo; col <= col_hi; ++col)
      if (detail::in_triangle(row, col, v))
        shape.region.emplace_back(row, col);
  return shape;
}

/// Rasterizes rectangle i: corner rows from y_i0 and y_i3, corner cols from
/// y_i1 and y_i2. Inverted corners are normalized with min/max.
inline RasterShape rectangle_shape(const Genome& genome, int i, int height, int width) {
  if (genome.kind() != ShapeKind::Rectangle)
    throw std::invalid_argument("rectangle_shape: genome kind is not Rectangle");
  const auto [row_lo, row_hi] =
      std::minmax({scaled_round(genome.at(i, 0), height), scaled_round(genome.at(i, 3), height)});
  const auto [col_lo, col_hi] =
      std::minmax({scaled_round(genome.at(i, 1), width), scaled_round(genome.at(i, 2), width)});

  RasterShape shape;
  shape.color = detail::shape_color(genome, i, 4);
  shape.alpha = genome.at(i, 7);
  for (int row = row_lo; row <= row_hi; ++row)
    for (int col = col_lo; col <= col_hi; ++col)
      shape.region.emplace_back(row, col);
  return shape;
}

namespace detail {

template <typename ShapeBuilder>
Image render_shapes(const Genome& genome, const Image& x, double epsilon, ShapeBuilder build) {
  Image x_adv = x;
  for (int i = 0; i < genome.num_shapes(); ++i) {
    const RasterShape shape = build(i);
    for (const auto& [row, col] : shape.region)
      for (int ch = 0; ch < Image::kChannels; ++ch) {
        double& v = x_adv.at(row, col, ch);
        v = blend(v, shape.color[ch], shape.alpha);
      }
  }
  return project_linf(x_adv, x, epsilon);
}

} // namespace detail

/// Composites all circles of the genome onto x in row order, then projects
/// onto the epsilon-ball around x intersected with [0,1].
inline Image render_circles(const Genome& genome, const Image& x, double epsilon, double beta) {
  if (genome.kind() != ShapeKind::Circle)
    throw std::invalid_argument("render_circles: genome kind is not Circle");
  return detail::render_shapes(genome, x, epsilon, [&](int i) {
    return circle_shape(genome, i, x.height(), x.width(), beta);
  });
}

inline Image render_triangles(const Genome& genome, const Image& x, double epsilon) {
  if (genome.kind() != ShapeKind::Triangle)
    throw std::invalid_argument("render_triangles: genome kind is not Triangle");
  return detail::render_shapes(genome, x, epsilon, [&](int i) {
    return triangle_shape(genome, i, x.height(), x.width());
  });
}

inline Image render_rectangles(const Genome& genome, const Image& x, double epsilon) {
  if (genome.kind() != ShapeKind::Rectangle)
    throw std::invalid_argument("render_rectangles: genome kind is not Rectangle");
  return detail::render_shapes(genome, x, epsilon, [&](int i) {
    return rectangle_shape(genome, i, x.height(), x.width());
  });
}

/// Kind dispatch; beta only participates for circle genomes.
inline Image render(const Genome& genome, const Image& x, double epsilon, double beta) {
  switch (genome.kind()) {
  case ShapeKind::Circle: return render_circles(genome, x, epsilon, beta);
  case ShapeKind::Triangle: return render_triangles(genome, x, epsilon);
  case ShapeKind::Rectangle: return render_rectangles(genome, x, epsilon);
  }
  throw std::invalid_argument("render: unknown shape kind");
}

} // namespace evoshape
