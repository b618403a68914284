#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "evoshape/config.hpp"
#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"
#include "evoshape/objective.hpp"
#include "evoshape/oracle.hpp"
#include "evoshape/raster.hpp"
#include "evoshape/record.hpp"
#include "evoshape/rng.hpp"

namespace evoshape {

/// Adaptive mutation-rate state: pl counts consecutive non-improving
/// iterations and resets to zero on every accepted improvement.
struct MutationState {
  int pl = 0;
  double b = 0.75;
  int n_p = 10;

  void improved() { pl = 0; }
  void rejected() { ++pl; }
};

/// mu = b * pl / n_p, clamped to at most 1 so it stays a valid probability.
inline double current_mu(const MutationState& state) {
  if (state.n_p < 1) throw std::invalid_argument("current_mu: n_p must be >= 1");
  return std::min(1.0, state.b * state.pl / state.n_p);
}

/// Diagnostics of one mutation, for tests and tracing.
struct MutationInfo {
  int changed_row = 0;      // c
  int change_count = 0;     // number of amended columns after the roll rewrite
  bool rolled = false;      // a circular row shift was applied
  bool reset_branch = false; // amended values were resampled rather than nudged
  std::vector<int> columns; // the amended column indices, in draw order
};

/// Mutation operator. Draws a row c in [0, N-1] and change in [0, a+1]; the
/// top value triggers a circular shift of the rows between c and a second
/// draw j (by -1 when c < j, else +1) and is then rewritten to a. A set of
/// `change` distinct columns of row c is amended: with probability mu each is
/// resampled from U(0,1), otherwise each is nudged by U(-0.5, 0.5). The child
/// is clipped back into [0,1]; the parent is never modified.
inline Genome mutate(const Genome& parent, double mu, RandomStream& rng,
                     MutationInfo* info = nullptr) {
  const int n = parent.num_shapes();
  const int a = parent.shape_arity();
  std::vector<double> child = parent.values();

  const int c = rng.uniform_int(0, n - 1);
  int change = rng.uniform_int(0, a + 1);

  bool rolled = false;
  if (change == a + 1) {
    change = a;
    const int other = rng.uniform_int(0, n - 1);
    const int lo = std::min(c, other);
    const int hi = std::max(c, other);
    auto first = child.begin() + static_cast<std::ptrdiff_t>(lo) * a;
    auto last = child.begin() + static_cast<std::ptrdiff_t>(hi + 1) * a;
    if (c < other) {
      std::rotate(first, first + a, last); // shift rows up by one, cyclically
    } else {
      std::rotate(first, last - a, last); // shift rows down by one
    }
    rolled = true;
  }

  const std::vector<int> columns = rng.choice_without_replacement(a, change);
  const bool reset = rng.uniform_real(0.0, 1.0) < mu;
  for (int col : columns) {
    double& v = child[static_cast<std::size_t>(c) * a + col];
    if (reset) {
      v = rng.uniform_real(0.0, 1.0);
    } else {
      v += rng.uniform_real(-0.5, 0.5);
    }
  }
  for (double& v : child) v = std::clamp(v, 0.0, 1.0);

  if (info) *info = MutationInfo{c, change, rolled, reset, columns};
  return Genome(parent.kind(), n, std::move(child));
}

/// Oracle failure surfaced from inside an attack run, carrying the number of
/// queries already spent.
class AttackError : public std::runtime_error {
public:
  AttackError(const std::string& what, int queries_used)
      : std::runtime_error(what), queries_used_(queries_used) {}

  int queries_used() const { return queries_used_; }

private:
  int queries_used_;
};

/// Per-iteration report handed to an optional observer.
struct AttackStep {
  int queries_used = 0;
  bool accepted = false;
  int pl = 0;
  double mu = 0.0;
  double loss = 0.0;
  double best_loss = 0.0;
};

using AttackObserver = std::function<void(const AttackStep&)>;

namespace detail {

inline ProbVector query_oracle(ClassifierOracle& oracle, QueryCounter& counter,
                               const Image& image) {
  try {
    ProbVector probs = oracle.probabilities(image);
    counter.increment();
    return probs;
  } catch (const std::exception& e) {
    throw AttackError(std::string("oracle failure: ") + e.what(), counter.used());
  }
}

} // namespace detail

/// The (1+1) evolutionary attack loop.
///
/// A single genome is initialized uniformly, rendered, and evaluated (query
/// 1); each following iteration mutates the incumbent, renders and evaluates
/// the child (one query), and keeps it only on strict loss improvement. The
/// run stops as soon as the cached probabilities of the incumbent put the
/// target class first, or when the query budget is exhausted; success checks
/// never spend extra queries. The caller is expected to have verified that x
/// is correctly classified as true_label and that the target differs.
inline AttackRecord attack(ClassifierOracle& oracle, const Image& x, int true_label,
                           const AttackConfig& config, const LossFunction& loss,
                           const AttackObserver& observer = nullptr) {
  config.validate();
  if (loss.mode() != LossFunction::Mode::TargetedLogMargin)
    throw std::invalid_argument("attack: loss must be the targeted log-margin");
  if (loss.target_class() != config.target_class)
    throw std::invalid_argument("attack: loss target and config target disagree");

  RandomStream rng(config.seed);
  QueryCounter counter(config.budget);

  Genome best = Genome::random(config.kind, config.num_shapes, rng);
  Image best_image = render(best, x, config.epsilon, config.beta);
  ProbVector best_probs = detail::query_oracle(oracle, counter, best_image);

  const int num_classes = best_probs.num_classes();
  config.validate_target(num_classes);
  if (true_label < 0 || true_label >= num_classes)
    throw std::invalid_argument("attack: true_label out of range");
  if (true_label == config.target_class)
    throw std::invalid_argument("attack: target class equals true label");

  double best_loss = loss.evaluate(best_probs);
  std::vector<double> trajectory{best_loss};
  MutationState state{0, config.b, config.n_p};
  if (observer)
    observer({counter.used(), true, state.pl, 0.0, best_loss, best_loss});

  while (!is_success_targeted(best_probs, config.target_class) && !counter.exhausted()) {
    const double mu = current_mu(state);
    Genome child = mutate(best, mu, rng);
    if (config.skip_noop_children && child == best) {
      state.rejected();
      continue;
    }
    Image child_image = render(child, x, config.epsilon, config.beta);
    ProbVector child_probs = detail::query_oracle(oracle, counter, child_image);
    const double child_loss = loss.evaluate(child_probs);
    trajectory.push_back(child_loss);

    const bool accepted = child_loss > best_loss;
    if (accepted) {
      best = std::move(child);
      best_image = std::move(child_image);
      best_probs = std::move(child_probs);
      best_loss = child_loss;
      state.improved();
    } else {
      state.rejected();
    }
    if (observer)
      observer({counter.used(), accepted, state.pl, mu, child_loss, best_loss});
  }

  const bool hit_target = is_success_targeted(best_probs, config.target_class);
  const bool left_true = is_success_untargeted(best_probs, true_label);
  return AttackRecord(hit_target, left_true, counter.used(), std::move(trajectory),
                      std::move(best), std::move(best_image), config.seed, config);
}

} // namespace evoshape
