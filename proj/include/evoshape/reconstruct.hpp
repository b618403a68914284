#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "evoshape/attack.hpp"
#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"
#include "evoshape/objective.hpp"
#include "evoshape/raster.hpp"
#include "evoshape/rng.hpp"

namespace evoshape {

struct ReconstructionResult {
  Image image;
  Genome genome;
  /// Best fitness (negative MSE) after each evaluation; non-decreasing.
  std::vector<double> fitness_trajectory;
};

/// Approximates a reference image with N evolved shapes: the same (1+1)
/// mutation/acceptance loop as the attack, but with negative-MSE fitness,
/// a black starting canvas, and no perturbation constraint (epsilon of 1
/// makes the projection a no-op since blending stays inside [0,1]).
inline ReconstructionResult reconstruct(const Image& reference, ShapeKind kind, int num_shapes,
                                        int iterations, std::uint64_t seed, double beta = 12.0) {
  if (iterations < 1) throw std::invalid_argument("reconstruct: iterations must be >= 1");
  const LossFunction loss = LossFunction::reconstruction(reference);
  const Image canvas(reference.height(), reference.width(), 0.0);

  RandomStream rng(seed);
  Genome best = Genome::random(kind, num_shapes, rng);
  Image best_image = render(best, canvas, 1.0, beta);
  double best_fitness = loss.evaluate(best_image);

  std::vector<double> trajectory;
  trajectory.reserve(static_cast<std::size_t>(iterations));
  trajectory.push_back(best_fitness);

  MutationState state;
  for (int it = 1; it < iterations; ++it) {
    Genome child = mutate(best, current_mu(state), rng);
    Image child_image = render(child, canvas, 1.0, beta);
    const double child_fitness = loss.evaluate(child_image);
    if (child_fitness > best_fitness) {
      best = std::move(child);
      best_image = std::move(child_image);
      best_fitness = child_fitness;
      state.improved();
    } else {
      state.rejected();
    }
    trajectory.push_back(best_fitness);
  }
  return {std::move(best_image), std::move(best), std::move(trajectory)};
}

} // namespace evoshape
