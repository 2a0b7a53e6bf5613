#include "dtplace/local_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "dtplace/error.hpp"
#include "dtplace/format.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

namespace {

bool device_moves(Neighborhood nb) { return nb == Neighborhood::component_and_device; }

CostBreakdown shifted(const CostBreakdown& e, const MoveDelta& d) {
  CostBreakdown out;
  out.offload = e.offload + d.offload;
  out.communication = e.communication + d.communication;
  out.total = out.offload + out.communication;
  return out;
}

FeatureVector shifted(const FeatureVector& f, const MoveDelta& d) {
  return {f.dist_off + d.dist_off, f.dist_com + d.dist_com};
}

// A move must beat the incumbent by more than rounding noise.
double improvement_floor(double current) {
  return current - 1e-12 * std::max(1.0, std::abs(current));
}

}  // namespace

SearchState make_state(const Instance& inst, const SampleSet& samples, Placement pl) {
  SearchState st;
  st.eval = evaluate(inst, pl);
  st.features = features(inst, pl);
  st.loads = LoadTable(inst, samples, pl);
  st.profile = overload_profile(inst, st.loads);
  st.placement = std::move(pl);
  return st;
}

Objective total_cost_objective() {
  return [](const CostBreakdown& e, const FeatureVector&) { return e.total; };
}

const char* to_string(Neighborhood nb) {
  switch (nb) {
    case Neighborhood::component: return "component";
    case Neighborhood::component_and_device: return "component_and_device";
  }
  return "?";
}

Neighborhood neighborhood_from_string(const std::string& name) {
  if (name == "component") return Neighborhood::component;
  if (name == "component_and_device") return Neighborhood::component_and_device;
  throw ConfigError("unknown neighborhood '" + name + "'");
}

std::vector<SearchState> neighbors(const Instance& inst, const SampleSet& samples,
                                   const SaaParams& params, const SearchState& state,
                                   Neighborhood nb) {
  const int threshold = params.overload_threshold(samples.theta());
  const auto moves = kernels::scan_moves(inst, samples, state.placement, state.loads, threshold,
                                         device_moves(nb), default_exec());
  std::vector<SearchState> out;
  for (const auto& m : moves) {
    if (!m.feasible) continue;
    SearchState next = state;
    kernels::apply_move(inst, samples, m, next.placement, next.loads);
    next.eval = shifted(state.eval, m.delta);
    next.features = shifted(state.features, m.delta);
    next.profile = overload_profile(inst, next.loads);
    out.push_back(std::move(next));
  }
  return out;
}

ClimbResult hill_climb(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                       const SearchState& start, const Objective& objective,
                       const ClimbOptions& opts) {
  ClimbResult res{start, {}, {}};
  SearchState& cur = res.endpoint;
  auto record = [&res](const SearchState& st) {
    res.trajectory.points.push_back(st.features);
    res.trajectory.placements.push_back(st.placement);
  };
  record(cur);
  const int threshold = params.overload_threshold(samples.theta());
  double cur_value = objective(cur.eval, cur.features);

  const bool device = device_moves(opts.neighborhood);
  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    const auto moves = kernels::scan_moves(inst, samples, cur.placement, cur.loads, threshold,
                                           device, opts.exec);
    res.stats.neighbors_evaluated += moves.size();
    const kernels::MoveEval* best = nullptr;
    double best_value = improvement_floor(cur_value);
    for (const auto& m : moves) {
      if (!m.feasible) continue;
      const double v = objective(shifted(cur.eval, m.delta), shifted(cur.features, m.delta));
      if (v < best_value) {
        best = &m;
        best_value = v;
      }
    }
    if (best == nullptr) break;

    kernels::apply_move(inst, samples, *best, cur.placement, cur.loads);
    cur.eval = evaluate(inst, cur.placement);
    cur.features = features(inst, cur.placement);
    cur.profile = overload_profile(inst, cur.loads);
    cur_value = objective(cur.eval, cur.features);
    record(cur);
  }
  res.trajectory.endpoint_value = cur.eval.total;
  res.stats.states_visited = res.trajectory.length();
  return res;
}

SearchState random_feasible_state(const Instance& inst, const SampleSet& samples,
                                  const SaaParams& params, std::uint64_t seed, int max_tries) {
  params.validate();
  Rng rng = make_stream(seed, "search");
  const std::size_t K = inst.num_components();
  const std::size_t S = inst.num_servers();
  const int theta = samples.theta();
  const int threshold = params.overload_threshold(theta);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(S) - 1);

  auto feasible_loads = [&](const LoadTable& loads) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto& srv = inst.servers()[s];
      if (kernels::count_overloads(loads.row(s), theta, srv.cost_per_cycle, srv.capacity,
                                   threshold) > threshold)
        return false;
    }
    return true;
  };

  std::vector<int> servers(K);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    for (auto& s : servers) s = pick(rng);
    Placement pl(servers);
    if (feasible_loads(LoadTable(inst, samples, pl))) return make_state(inst, samples, std::move(pl));
  }

  // Greedy fallback: components in random order, each onto the feasible
  // server with the smallest current worst excess.
  std::vector<std::size_t> order(K);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::int64_t> sums(S * static_cast<std::size_t>(theta), 0);
  std::vector<int> assigned(K, -1);
  for (std::size_t k : order) {
    int chosen = -1;
    double chosen_excess = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      const auto& srv = inst.servers()[s];
      const std::int64_t* row = sums.data() + s * static_cast<std::size_t>(theta);
      if (kernels::count_overloads_added(row, samples.row(k), theta, srv.cost_per_cycle,
                                         srv.capacity, threshold) > threshold)
        continue;
      const double excess =
          kernels::server_stats(row, theta, srv.cost_per_cycle, srv.capacity).worst_excess;
      if (chosen < 0 || excess < chosen_excess) {
        chosen = static_cast<int>(s);
        chosen_excess = excess;
      }
    }
    if (chosen < 0)
      throw NoFeasibleState("no feasible placement found at epsilon=" + fixed(params.epsilon, 6) +
                            " after " + std::to_string(max_tries) + " random draws and greedy fallback");
    assigned[k] = chosen;
    std::int64_t* row = sums.data() + static_cast<std::size_t>(chosen) * static_cast<std::size_t>(theta);
    const std::int64_t* src = samples.row(k);
    for (int t = 0; t < theta; ++t) row[t] += src[t];
  }
  return make_state(inst, samples, Placement(std::move(assigned)));
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "q,dist_off,dist_com,rho_endpoint\n";
  for (std::size_t q = 0; q < traj.points.size(); ++q)
    os << q + 1 << ',' << fixed(traj.points[q].dist_off) << ',' << fixed(traj.points[q].dist_com)
       << ',' << fixed(traj.endpoint_value) << '\n';
  return os.str();
}

}  // namespace dtplace
