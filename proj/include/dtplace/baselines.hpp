#pragma once

#include <cstddef>
#include <cstdint>

#include "dtplace/local_search.hpp"

namespace dtplace {

struct BaselineResult {
  SearchState best_state;
  std::size_t states_visited = 0;
};

/// Seed of the i-th start shared by the random and restart baselines.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

/// Best of `trials` random feasible states.
BaselineResult baseline_random_best(const Instance& inst, const SampleSet& samples,
                                    const SaaParams& params, int trials, std::uint64_t seed);

/// Hill-climbs from each of the same `trials` random starts and keeps the
/// best endpoint.
BaselineResult baseline_restart_hillclimb(const Instance& inst, const SampleSet& samples,
                                          const SaaParams& params, int trials,
                                          std::uint64_t seed,
                                          Neighborhood nb = Neighborhood::component_and_device);

/// Devices then components in index order, each onto the nearest server that
/// keeps the partial placement feasible.
BaselineResult baseline_nearest(const Instance& inst, const SampleSet& samples,
                                const SaaParams& params);

}  // namespace dtplace
