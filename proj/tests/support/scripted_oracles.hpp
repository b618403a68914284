#pragma once

// Deterministic oracles for exercising the attack loop's accounting and
// acceptance behavior.

#include <stdexcept>
#include <utility>
#include <vector>

#include "evoshape/image.hpp"
#include "evoshape/oracle.hpp"
#include "evoshape/probability.hpp"

namespace evoshape_test {

/// Always returns the same probability vector.
class FixedOracle : public evoshape::ClassifierOracle {
public:
  explicit FixedOracle(std::vector<double> probs) : probs_(std::move(probs)) {}

  int num_classes() const override { return static_cast<int>(probs_.size()); }

  evoshape::ProbVector probabilities(const evoshape::Image&) override {
    return evoshape::ProbVector::from_raw(probs_, num_classes());
  }

private:
  std::vector<double> probs_;
};

/// Uniform vector 1/K regardless of the input.
class UniformOracle : public FixedOracle {
public:
  explicit UniformOracle(int k)
      : FixedOracle(std::vector<double>(static_cast<std::size_t>(k), 1.0 / k)) {}
};

/// Plays back a scripted sequence of probability vectors, one per call;
/// repeats the last entry once the script is exhausted.
class SequenceOracle : public evoshape::ClassifierOracle {
public:
  explicit SequenceOracle(std::vector<std::vector<double>> script)
      : script_(std::move(script)) {
    if (script_.empty()) throw std::invalid_argument("SequenceOracle: empty script");
  }

  int num_classes() const override { return static_cast<int>(script_.front().size()); }

  evoshape::ProbVector probabilities(const evoshape::Image&) override {
    const std::size_t idx = call_ < script_.size() ? call_ : script_.size() - 1;
    ++call_;
    return evoshape::ProbVector::from_raw(script_[idx], num_classes());
  }

  std::size_t calls() const { return call_; }

private:
  std::vector<std::vector<double>> script_;
  std::size_t call_ = 0;
};

/// Forwards to an inner oracle while counting calls.
class CountingOracle : public evoshape::ClassifierOracle {
public:
  explicit CountingOracle(evoshape::ClassifierOracle& inner) : inner_(inner) {}

  int num_classes() const override { return inner_.num_classes(); }

  evoshape::ProbVector probabilities(const evoshape::Image& image) override {
    ++calls_;
    return inner_.probabilities(image);
  }

  int calls() const { return calls_; }

private:
  evoshape::ClassifierOracle& inner_;
  int calls_ = 0;
};

/// Succeeds (uniform vector) until the given call number, then throws.
class FailingOracle : public evoshape::ClassifierOracle {
public:
  FailingOracle(int k, int fail_on_call) : k_(k), fail_on_call_(fail_on_call) {}

  int num_classes() const override { return k_; }

  evoshape::ProbVector probabilities(const evoshape::Image&) override {
    if (++call_ >= fail_on_call_) throw std::runtime_error("scripted oracle outage");
    return evoshape::ProbVector::from_raw(
        std::vector<double>(static_cast<std::size_t>(k_), 1.0 / k_), k_);
  }

private:
  int k_;
  int fail_on_call_;
  int call_ = 0;
};

} // namespace evoshape_test
