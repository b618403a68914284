#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "evoshape/image.hpp"
#include "evoshape/probability.hpp"

namespace evoshape {

/// Probability floor that keeps the log-margin finite on degenerate one-hot
/// vectors.
inline constexpr double kDefaultProbFloor = 1e-12;

/// Targeted log-margin: ln(max(f_c, p_min)) - ln(max(sum_{i != c} f_i, p_min)).
/// Maximizing it raises the target-class probability while jointly pushing
/// down the combined mass of every other class.
inline double targeted_loss(const ProbVector& probs, int target_class,
                            double p_min = kDefaultProbFloor) {
  if (target_class < 0 || target_class >= probs.num_classes())
    throw std::invalid_argument("targeted_loss: target class out of range");
  double rest = 0.0;
  for (int i = 0; i < probs.num_classes(); ++i)
    if (i != target_class) rest += probs[i];
  return std::log(std::max(probs[target_class], p_min)) - std::log(std::max(rest, p_min));
}

/// The model predicts the target class (argmax ties resolve to the lowest
/// class index).
inline bool is_success_targeted(const ProbVector& probs, int target_class) {
  return probs.argmax() == target_class;
}

/// The model predicts anything but the true label.
inline bool is_success_untargeted(const ProbVector& probs, int true_label) {
  return probs.argmax() != true_label;
}

/// Negative mean squared error over all pixel-channels; 0 iff identical,
/// higher is better so it plugs into the same maximization loop.
inline double reconstruction_loss(const Image& rendered, const Image& reference) {
  if (!rendered.same_shape(reference))
    throw std::invalid_argument("reconstruction_loss: image shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    const double d = rendered.data()[i] - reference.data()[i];
    sum += d * d;
  }
  return -sum / static_cast<double>(rendered.size());
}

/// Fitness used by the evolution loop: either the targeted log-margin over
/// oracle probabilities or negative MSE against a reference image.
class LossFunction {
public:
  enum class Mode { TargetedLogMargin, ReconstructionNegMse };

  static LossFunction targeted(int target_class, double p_min = kDefaultProbFloor) {
    LossFunction f;
    f.mode_ = Mode::TargetedLogMargin;
    f.target_class_ = target_class;
    f.p_min_ = p_min;
    return f;
  }

  static LossFunction reconstruction(Image reference) {
    LossFunction f;
    f.mode_ = Mode::ReconstructionNegMse;
    f.reference_ = std::move(reference);
    return f;
  }

  Mode mode() const { return mode_; }
  int target_class() const { return target_class_; }
  double p_min() const { return p_min_; }

  double evaluate(const ProbVector& probs) const {
    if (mode_ != Mode::TargetedLogMargin)
      throw std::logic_error("LossFunction: probability input requires targeted mode");
    return targeted_loss(probs, target_class_, p_min_);
  }

  double evaluate(const Image& rendered) const {
    if (mode_ != Mode::ReconstructionNegMse)
      throw std::logic_error("LossFunction: image input requires reconstruction mode");
    return reconstruction_loss(rendered, *reference_);
  }

private:
  LossFunction() = default;

  Mode mode_ = Mode::TargetedLogMargin;
  int target_class_ = 0;
  double p_min_ = kDefaultProbFloor;
  std::optional<Image> reference_;
};

} // namespace evoshape
