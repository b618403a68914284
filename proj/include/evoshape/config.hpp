#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "evoshape/genome.hpp"

namespace evoshape {

/// Hyper-parameters of one attack run. Defaults follow the reference setup:
/// epsilon 0.05, beta 12 (circles only), b 0.75, n_p 10, budget 10000.
struct AttackConfig {
  double epsilon = 0.05;   // L-infinity radius of the perturbation ball
  int num_shapes = 100;    // N
  ShapeKind kind = ShapeKind::Circle;
  double beta = 12.0;      // circle radius divider: max radius = (h+w)/beta
  double b = 0.75;         // mutation-rate slope
  int n_p = 10;            // mutation-rate denominator
  int budget = 10000;      // max oracle queries M
  int target_class = 0;    // c
  std::uint64_t seed = 0;
  // Extension, off by default: when a mutation yields a child identical to
  // its parent, skip the oracle call instead of spending a query on it.
  bool skip_noop_children = false;

  /// Checks every oracle-independent invariant.
  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw std::invalid_argument("AttackConfig: epsilon must be in (0,1]");
    if (num_shapes < 1) throw std::invalid_argument("AttackConfig: num_shapes must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("AttackConfig: beta must be > 0");
    if (n_p < 1) throw std::invalid_argument("AttackConfig: n_p must be >= 1");
    if (budget < 1) throw std::invalid_argument("AttackConfig: budget must be >= 1");
    if (target_class < 0) throw std::invalid_argument("AttackConfig: target_class must be >= 0");
  }

  /// Target-class range check; deferred until the oracle's class count is
  /// known, since oracles are pluggable.
  void validate_target(int num_classes) const {
    if (target_class < 0 || target_class >= num_classes)
      throw std::invalid_argument("AttackConfig: target_class " + std::to_string(target_class) +
                                  " outside [0, " + std::to_string(num_classes) + ")");
  }

  friend bool operator==(const AttackConfig&, const AttackConfig&) = default;
};

} // namespace evoshape
