#pragma once

// Hot loops of the solver. Each kernel has a serial reference version and an
// OpenMP version; the two must agree exactly (integer counts, identical
// per-item arithmetic, no cross-thread floating reductions).

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtplace/cost.hpp"
#include "dtplace/domain.hpp"
#include "dtplace/saa.hpp"

namespace dtplace {

enum class Exec { serial, parallel };

/// Process-wide default used when callers do not pick one.
Exec default_exec();
void set_default_exec(Exec exec);

/// Applies DTPLACE_THREADS (if set) to the OpenMP runtime.
void configure_threads_from_env();

namespace kernels {

/// Number of scenarios with cost_per_cycle * sums[t] > capacity. Stops
/// counting once the count exceeds `limit` (pass theta to disable).
int count_overloads(const std::int64_t* sums, int theta, double cost_per_cycle,
                    double capacity, int limit);

/// Same as count_overloads for sums[t] + extra[t].
int count_overloads_added(const std::int64_t* sums, const std::int64_t* extra, int theta,
                          double cost_per_cycle, double capacity, int limit);

struct ServerStats {
  int overload_count = 0;
  double worst_excess = 0.0;
};

ServerStats server_stats(const std::int64_t* sums, int theta, double cost_per_cycle,
                         double capacity);

std::vector<ServerStats> all_server_stats(const Instance& inst, const LoadTable& loads,
                                          Exec exec);

enum class MoveKind : std::uint8_t {
  component,  // one component to another server
  device,     // every component of one device onto a single server
};

/// One candidate move. `target` is a flat component index for component
/// moves and a device index for device moves.
struct MoveEval {
  MoveKind kind = MoveKind::component;
  std::size_t target = 0;
  int to = 0;
  bool feasible = false;
  MoveDelta delta;
};

/// Every move of the neighborhood. Device by device: the component moves of
/// device d in (component, server) order, then (with device moves enabled) the
/// relocations of d to each server, skipping no-ops and single-component
/// devices, whose relocation duplicates a component move.
///
/// Feasibility is judged on the destination only: removing components never
/// raises a server's overload count, so a feasible state stays feasible at
/// every source.
std::vector<MoveEval> scan_moves(const Instance& inst, const SampleSet& samples,
                                 const Placement& pl, const LoadTable& loads, int threshold,
                                 bool device_moves, Exec exec);

/// Applies `m` to a placement and its load table.
void apply_move(const Instance& inst, const SampleSet& samples, const MoveEval& m, Placement& pl,
                LoadTable& loads);

}  // namespace kernels
}  // namespace dtplace
