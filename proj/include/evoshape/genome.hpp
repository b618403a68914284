#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evoshape/rng.hpp"

namespace evoshape {

enum class ShapeKind { Circle, Triangle, Rectangle };

/// Number of parameters encoding one shape of the given kind.
constexpr int arity(ShapeKind kind) {
  switch (kind) {
  case ShapeKind::Circle: return 7;
  case ShapeKind::Triangle: return 10;
  case ShapeKind::Rectangle: return 8;
  }
  throw std::invalid_argument("arity: unknown shape kind");
}

inline const char* to_string(ShapeKind kind) {
  switch (kind) {
  case ShapeKind::Circle: return "circle";
  case ShapeKind::Triangle: return "triangle";
  case ShapeKind::Rectangle: return "rectangle";
  }
  throw std::invalid_argument("to_string: unknown shape kind");
}

inline ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "circle") return ShapeKind::Circle;
  if (name == "triangle") return ShapeKind::Triangle;
  if (name == "rectangle") return ShapeKind::Rectangle;
  throw std::invalid_argument("unknown shape kind: " + name);
}

/// A solution of N shapes of one kind: an N x arity(kind) matrix with every
/// entry in [0,1], stored row-major. Row i holds the parameters of shape i;
/// shapes are composited in row order.
class Genome {
public:
  Genome() = default;

  Genome(ShapeKind kind, int num_shapes, std::vector<double> values)
      : kind_(kind), num_shapes_(num_shapes), values_(std::move(values)) {
    if (num_shapes_ < 1)
      throw std::invalid_argument("Genome: num_shapes must be >= 1");
    const std::size_t expected =
        static_cast<std::size_t>(num_shapes_) * arity(kind_);
    if (values_.size() != expected)
      throw std::invalid_argument("Genome: value count " + std::to_string(values_.size()) +
                                  " does not match " + std::to_string(num_shapes_) + "x" +
                                  std::to_string(arity(kind_)));
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
        throw std::invalid_argument("Genome: entry outside [0,1] at flat index " +
                                    std::to_string(i));
    }
  }

  /// Uniform(0,1) initialization, drawn row-major.
  static Genome random(ShapeKind kind, int num_shapes, RandomStream& rng) {
    if (num_shapes < 1)
      throw std::invalid_argument("Genome::random: num_shapes must be >= 1");
    std::vector<double> values(static_cast<std::size_t>(num_shapes) * arity(kind));
    for (auto& v : values) v = rng.uniform_real(0.0, 1.0);
    return Genome(kind, num_shapes, std::move(values));
  }

  ShapeKind kind() const { return kind_; }
  int num_shapes() const { return num_shapes_; }
  int shape_arity() const { return arity(kind_); }

  double at(int shape, int param) const {
    return values_[static_cast<std::size_t>(shape) * shape_arity() + param];
  }

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Genome&, const Genome&) = default;

private:
  ShapeKind kind_ = ShapeKind::Circle;
  int num_shapes_ = 0;
  std::vector<double> values_;
};

} // namespace evoshape
