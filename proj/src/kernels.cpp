#include "dtplace/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <string>

namespace dtplace {

namespace {
std::atomic<Exec> g_exec{Exec::parallel};

// Below this many scenario-cells a parallel region costs more than it saves.
constexpr std::size_t kParallelGrain = 1u << 14;
}  // namespace

Exec default_exec() { return g_exec.load(); }
void set_default_exec(Exec exec) { g_exec.store(exec); }

void configure_threads_from_env() {
  if (const char* env = std::getenv("DTPLACE_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) omp_set_num_threads(n);
  }
}

namespace kernels {

int count_overloads(const std::int64_t* sums, int theta, double cost_per_cycle,
                    double capacity, int limit) {
  int count = 0;
  for (int t = 0; t < theta; ++t) {
    if (cost_per_cycle * static_cast<double>(sums[t]) > capacity && ++count > limit) break;
  }
  return count;
}

int count_overloads_added(const std::int64_t* sums, const std::int64_t* extra, int theta,
                          double cost_per_cycle, double capacity, int limit) {
  int count = 0;
  for (int t = 0; t < theta; ++t) {
    if (cost_per_cycle * static_cast<double>(sums[t] + extra[t]) > capacity && ++count > limit)
      break;
  }
  return count;
}

ServerStats server_stats(const std::int64_t* sums, int theta, double cost_per_cycle,
                         double capacity) {
  ServerStats st;
  st.worst_excess = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < theta; ++t) {
    const double excess = cost_per_cycle * static_cast<double>(sums[t]) - capacity;
    st.overload_count += excess > 0.0 ? 1 : 0;
    st.worst_excess = std::max(st.worst_excess, excess);
  }
  return st;
}

std::vector<ServerStats> all_server_stats(const Instance& inst, const LoadTable& loads,
                                          Exec exec) {
  const auto S = static_cast<long>(loads.num_servers());
  std::vector<ServerStats> out(loads.num_servers());
  const bool par = exec == Exec::parallel &&
                   loads.num_servers() * static_cast<std::size_t>(loads.theta()) >= kParallelGrain;
#pragma omp parallel for schedule(static) if (par)
  for (long s = 0; s < S; ++s) {
    const auto& srv = inst.servers()[static_cast<std::size_t>(s)];
    out[static_cast<std::size_t>(s)] = server_stats(loads.row(static_cast<std::size_t>(s)),
                                                    loads.theta(), srv.cost_per_cycle,
                                                    srv.capacity);
  }
  return out;
}

namespace {

MoveDelta device_move_delta(const Instance& inst, const Placement& pl, std::size_t d,
                            std::size_t to) {
  const auto& comps = inst.devices()[d].components;
  const std::size_t base = inst.device_offset(d);
  const double r = inst.unit_transport_cost();
  MoveDelta out;
  double off = 0.0;
  double com = 0.0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto from = static_cast<std::size_t>(pl[base + c]);
    const double de = inst.server_device_distance(to, d) - inst.server_device_distance(from, d);
    out.dist_off += de;
    off += de * comps[c].offload_kb;
    for (std::size_t c2 = 0; c2 < comps.size(); ++c2) {
      if (c2 == c) continue;
      const double l = inst.server_server_distance(from, static_cast<std::size_t>(pl[base + c2]));
      out.dist_com -= l;
      com -= l * comps[c].exchange_kb[c2];
    }
  }
  // Co-located afterwards, so the device's whole communication cost vanishes.
  out.offload = off * r;
  out.communication = com * r;
  return out;
}

bool device_move_feasible(const Instance& inst, const SampleSet& samples, const Placement& pl,
                          const LoadTable& loads, std::size_t d, std::size_t to, int threshold) {
  const auto& srv = inst.servers()[to];
  const std::size_t base = inst.device_offset(d);
  const std::size_t n = inst.devices()[d].components.size();
  const std::int64_t* sums = loads.row(to);
  int count = 0;
  for (int t = 0; t < loads.theta(); ++t) {
    std::int64_t v = sums[t];
    for (std::size_t c = 0; c < n; ++c)
      if (static_cast<std::size_t>(pl[base + c]) != to) v += samples(base + c, t);
    if (srv.cost_per_cycle * static_cast<double>(v) > srv.capacity && ++count > threshold)
      return false;
  }
  return true;
}

}  // namespace

std::vector<MoveEval> scan_moves(const Instance& inst, const SampleSet& samples,
                                 const Placement& pl, const LoadTable& loads, int threshold,
                                 bool device_moves, Exec exec) {
  const std::size_t S = inst.num_servers();
  if (S < 2) return {};
  std::vector<MoveEval> moves;
  moves.reserve(inst.num_components() * (S - 1) * (device_moves ? 2 : 1));
  for (std::size_t d = 0; d < inst.num_devices(); ++d) {
    const std::size_t base = inst.device_offset(d);
    const std::size_t n = inst.devices()[d].components.size();
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t s = 0; s < S; ++s)
        if (static_cast<std::size_t>(pl[base + c]) != s)
          moves.push_back({MoveKind::component, base + c, static_cast<int>(s), false, {}});
    if (!device_moves || n < 2) continue;
    for (std::size_t s = 0; s < S; ++s) {
      bool all_there = true;
      for (std::size_t c = 0; c < n; ++c) all_there &= static_cast<std::size_t>(pl[base + c]) == s;
      if (!all_there) moves.push_back({MoveKind::device, d, static_cast<int>(s), false, {}});
    }
  }

  const auto count = static_cast<long>(moves.size());
  const bool par = exec == Exec::parallel &&
                   moves.size() * static_cast<std::size_t>(loads.theta()) >= kParallelGrain;
#pragma omp parallel for schedule(dynamic, 4) if (par)
  for (long i = 0; i < count; ++i) {
    MoveEval& m = moves[static_cast<std::size_t>(i)];
    const auto to = static_cast<std::size_t>(m.to);
    if (m.kind == MoveKind::component) {
      const auto& srv = inst.servers()[to];
      m.feasible = count_overloads_added(loads.row(to), samples.row(m.target), loads.theta(),
                                         srv.cost_per_cycle, srv.capacity,
                                         threshold) <= threshold;
      m.delta = move_delta(inst, pl, m.target, m.to);
    } else {
      m.feasible = device_move_feasible(inst, samples, pl, loads, m.target, to, threshold);
      m.delta = device_move_delta(inst, pl, m.target, to);
    }
  }
  return moves;
}

void apply_move(const Instance& inst, const SampleSet& samples, const MoveEval& m, Placement& pl,
                LoadTable& loads) {
  const auto to = static_cast<std::size_t>(m.to);
  auto shift = [&](std::size_t k, std::size_t dest) {
    const auto from = static_cast<std::size_t>(pl[k]);
    if (from == dest) return;
    loads.move(samples, k, from, dest);
    pl[k] = static_cast<int>(dest);
  };
  if (m.kind == MoveKind::component) {
    shift(m.target, to);

  } else {
    const std::size_t base = inst.device_offset(m.target);
    for (std::size_t c = 0; c < inst.devices()[m.target].components.size(); ++c) shift(base + c, to);
  }
}

}  // namespace kernels
}  // namespace dtplace
