#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evoshape/config.hpp"
#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"

namespace evoshape {

/// Budget accounting for oracle queries. Every oracle evaluation increments
/// the counter by exactly one; incrementing past the limit throws rather than
/// wrapping.
class QueryCounter {
public:
  explicit QueryCounter(int limit) : limit_(limit) {
    if (limit < 1) throw std::invalid_argument("QueryCounter: limit must be >= 1");
  }

  void increment() {
    if (used_ >= limit_) throw std::logic_error("QueryCounter: budget exceeded");
    ++used_;
  }

  int used() const { return used_; }
  int limit() const { return limit_; }
  bool exhausted() const { return used_ >= limit_; }

private:
  int used_ = 0;
  int limit_;
};

/// Outcome of a single attack run.
///
/// Construction enforces the protocol invariants: the loss trajectory holds
/// one value per spent query, and a targeted success is always an untargeted
/// success (the target class never equals the true label).
class AttackRecord {
public:
  AttackRecord() = default;

  AttackRecord(bool success_targeted, bool success_untargeted, int queries_used,
               std::vector<double> loss_trajectory, Genome final_genome, Image final_image,
               std::uint64_t seed, AttackConfig config)
      : success_targeted_(success_targeted), success_untargeted_(success_untargeted),
        queries_used_(queries_used), loss_trajectory_(std::move(loss_trajectory)),
        final_genome_(std::move(final_genome)), final_image_(std::move(final_image)),
        seed_(seed), config_(std::move(config)) {
    if (success_targeted_ && !success_untargeted_)
      throw std::logic_error("AttackRecord: targeted success implies untargeted success");
    if (loss_trajectory_.size() != static_cast<std::size_t>(queries_used_))
      throw std::logic_error("AttackRecord: trajectory length must equal queries_used");
    if (queries_used_ < 0 || queries_used_ > config_.budget)
      throw std::logic_error("AttackRecord: queries_used outside [0, budget]");
  }

  bool success_targeted() const { return success_targeted_; }
  bool success_untargeted() const { return success_untargeted_; }
  int queries_used() const { return queries_used_; }
  const std::vector<double>& loss_trajectory() const { return loss_trajectory_; }
  const Genome& final_genome() const { return final_genome_; }
  const Image& final_image() const { return final_image_; }
  std::uint64_t seed() const { return seed_; }
  const AttackConfig& config() const { return config_; }

  friend bool operator==(const AttackRecord&, const AttackRecord&) = default;

private:
  bool success_targeted_ = false;
  bool success_untargeted_ = false;
  int queries_used_ = 0;
  std::vector<double> loss_trajectory_;
  Genome final_genome_;
  Image final_image_;
  std::uint64_t seed_ = 0;
  AttackConfig config_;
};

} // namespace evoshape
