#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evoshape {

/// Per-class probability vector as returned by a classifier oracle.
///
/// Ingest accepts raw vectors whose entries are finite and non-negative and
/// whose sum lies within kSumTolerance of 1 (real model servers emit rounded
/// float32 values), then renormalizes to an exact simplex point. Anything
/// else is rejected.
class ProbVector {
public:
  static constexpr double kSumTolerance = 1e-3;

  ProbVector() = default;

  static ProbVector from_raw(std::vector<double> raw, int expected_classes) {
    if (expected_classes < 2)
      throw std::invalid_argument("ProbVector: need at least 2 classes");
    if (raw.size() != static_cast<std::size_t>(expected_classes))
      throw std::invalid_argument("ProbVector: got " + std::to_string(raw.size()) +
                                  " entries, expected " + std::to_string(expected_classes));
    double sum = 0.0;
    for (double v : raw) {
      if (!(std::isfinite(v) && v >= 0.0))
        throw std::invalid_argument("ProbVector: entries must be finite and >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
      throw std::invalid_argument("ProbVector: sum " + std::to_string(sum) +
                                  " outside 1 +/- " + std::to_string(kSumTolerance));
    for (double& v : raw) v /= sum;
    ProbVector p;
    p.probs_ = std::move(raw);
    return p;
  }

  int num_classes() const { return static_cast<int>(probs_.size()); }

  double operator[](int klass) const { return probs_[static_cast<std::size_t>(klass)]; }

  const std::vector<double>& values() const { return probs_; }

  /// Index of the largest probability; ties resolve to the lowest class index.
  int argmax() const {
    int best = 0;
    for (int i = 1; i < num_classes(); ++i)
      if (probs_[i] > probs_[best]) best = i;
    return best;
  }

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

private:
  std::vector<double> probs_;
};

} // namespace evoshape
