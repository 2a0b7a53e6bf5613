#include "dtplace/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "dtplace/error.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

namespace {

void check_trials(int trials) {
  if (trials < 1) throw ConfigError("baseline trials must be >= 1");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return stream_seed(seed, "baseline-trial", static_cast<std::uint64_t>(trial));
}

BaselineResult baseline_random_best(const Instance& inst, const SampleSet& samples,
                                    const SaaParams& params, int trials, std::uint64_t seed) {
  check_trials(trials);
  BaselineResult res;
  for (int i = 0; i < trials; ++i) {
    SearchState st = random_feasible_state(inst, samples, params, trial_seed(seed, i));
    // Strict comparison keeps the lowest trial index on ties.
    if (i == 0 || st.eval.total < res.best_state.eval.total) res.best_state = std::move(st);
  }
  res.states_visited = static_cast<std::size_t>(trials);
  return res;
}

BaselineResult baseline_restart_hillclimb(const Instance& inst, const SampleSet& samples,
                                          const SaaParams& params, int trials,
                                          std::uint64_t seed, Neighborhood nb) {
  check_trials(trials);
  BaselineResult res;
  const Objective rho = total_cost_objective();
  ClimbOptions opts;
  opts.neighborhood = nb;
  for (int i = 0; i < trials; ++i) {
    const SearchState start = random_feasible_state(inst, samples, params, trial_seed(seed, i));
    ClimbResult climb = hill_climb(inst, samples, params, start, rho, opts);
    res.states_visited += climb.trajectory.length();
    if (i == 0 || climb.endpoint.eval.total < res.best_state.eval.total)
      res.best_state = std::move(climb.endpoint);
  }
  return res;
}

BaselineResult baseline_nearest(const Instance& inst, const SampleSet& samples,
                                const SaaParams& params) {
  params.validate();
  const std::size_t S = inst.num_servers();
  const int theta = samples.theta();
  const int threshold = params.overload_threshold(theta);
  std::vector<std::int64_t> sums(S * static_cast<std::size_t>(theta), 0);
  std::vector<int> assigned(inst.num_components(), -1);
  std::vector<std::size_t> order(S);

  for (std::size_t d = 0; d < inst.num_devices(); ++d) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return inst.server_device_distance(a, d) < inst.server_device_distance(b, d);
    });
    for (std::size_t c = 0; c < inst.devices()[d].components.size(); ++c) {
      const std::size_t k = inst.flat_index(d, c);
      int chosen = -1;
      for (std::size_t s : order) {
        const auto& srv = inst.servers()[s];
        const std::int64_t* row = sums.data() + s * static_cast<std::size_t>(theta);
        if (kernels::count_overloads_added(row, samples.row(k), theta, srv.cost_per_cycle,
                                           srv.capacity, threshold) <= threshold) {
          chosen = static_cast<int>(s);
          break;
        }
      }
      if (chosen < 0)
        throw NoFeasibleState("nearest-server greedy cannot place device " + std::to_string(d) +
                              " component " + std::to_string(c));
      assigned[k] = chosen;
      std::int64_t* row = sums.data() + static_cast<std::size_t>(chosen) * static_cast<std::size_t>(theta);
      const std::int64_t* src = samples.row(k);
      for (int t = 0; t < theta; ++t) row[t] += src[t];
    }
  }
  BaselineResult res;
  res.best_state = make_state(inst, samples, Placement(std::move(assigned)));
  res.states_visited = 1;
  return res;
}

}  // namespace dtplace
