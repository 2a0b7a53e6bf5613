#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dtplace/cost.hpp"
#include "dtplace/domain.hpp"
#include "dtplace/kernels.hpp"
#include "dtplace/saa.hpp"

namespace dtplace {

/// A placement together with everything derived from it. The y and z parts
/// of the state are implied by the placement and never stored.
struct SearchState {
  Placement placement;
  CostBreakdown eval;
  FeatureVector features;
  OverloadProfile profile;
  LoadTable loads;

  bool feasible(const SaaParams& params) const { return is_feasible(profile, params); }
};

/// Recomputes every cache from scratch.
SearchState make_state(const Instance& inst, const SampleSet& samples, Placement pl);

/// States visited by one descent, in order.
struct Trajectory {
  std::vector<FeatureVector> points;
  std::vector<Placement> placements;
  double endpoint_value = 0.0;  // rho of the last state

  std::size_t length() const { return points.size(); }
};

struct SearchStats {
  std::size_t states_visited = 0;
  std::size_t neighbors_evaluated = 0;
};

/// Scores a candidate from its cost and features; lower is better.
using Objective = std::function<double(const CostBreakdown&, const FeatureVector&)>;

Objective total_cost_objective();

enum class Neighborhood {
  component,             // single-component reassignment only
  component_and_device,  // plus relocating a whole device onto one server
};

const char* to_string(Neighborhood nb);
Neighborhood neighborhood_from_string(const std::string& name);  // throws ConfigError

/// Every feasible neighbor of `state` in kernels::scan_moves order, with cost
/// and features obtained by delta evaluation. Requires a feasible state.
std::vector<SearchState> neighbors(const Instance& inst, const SampleSet& samples,
                                   const SaaParams& params, const SearchState& state,
                                   Neighborhood nb = Neighborhood::component_and_device);

struct ClimbResult {
  SearchState endpoint;
  Trajectory trajectory;
  SearchStats stats;
};

struct ClimbOptions {
  std::size_t max_steps = std::numeric_limits<std::size_t>::max();
  Neighborhood neighborhood = Neighborhood::component_and_device;
  Exec exec = default_exec();
};

/// Steepest descent over feasible moves. Takes the neighbor with the lowest
/// objective (first in scan order on ties) as long as it strictly improves,
/// for at most `opts.max_steps` moves.
ClimbResult hill_climb(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                       const SearchState& start, const Objective& objective,
                       const ClimbOptions& opts = {});

/// Uniform random placements until one is feasible; after `max_tries`
/// rejections falls back to a load-aware greedy. Throws NoFeasibleState if
/// both fail.
SearchState random_feasible_state(const Instance& inst, const SampleSet& samples,
                                  const SaaParams& params, std::uint64_t seed,
                                  int max_tries = 10000);

/// CSV with columns q,dist_off,dist_com,rho_endpoint.
std::string trajectory_csv(const Trajectory& traj);

}  // namespace dtplace
