#include "dtplace/oracle.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "dtplace/error.hpp"

namespace dtplace {

namespace {

struct ChunkBest {
  bool found = false;
  std::uint64_t index = 0;
  Placement placement;
};

// Enumerates placements with indices in [lo, hi). Component 0 is the most
// significant digit, so index order is lexicographic placement order.
ChunkBest enumerate_chunk(const Instance& inst, const SampleSet& samples, int threshold,
                          std::uint64_t lo, std::uint64_t hi) {
  ChunkBest best;
  if (lo >= hi) return best;
  const std::size_t K = inst.num_components();
  const std::size_t S = inst.num_servers();
  const int theta = samples.theta();

  std::vector<int> digits(K, 0);
  std::uint64_t rest = lo;
  for (std::size_t j = K; j-- > 0;) {
    digits[j] = static_cast<int>(rest % S);
    rest /= S;
  }
  Placement pl(digits);
  LoadTable loads(inst, samples, pl);
  std::vector<char> over(S, 0);
  int n_over = 0;
  auto recount = [&](std::size_t s) {
    const auto& srv = inst.servers()[s];
    const char now = kernels::count_overloads(loads.row(s), theta, srv.cost_per_cycle,
                                              srv.capacity, threshold) > threshold;
    n_over += now - over[s];
    over[s] = now;
  };
  for (std::size_t s = 0; s < S; ++s) recount(s);
  double cost = evaluate(inst, pl).total;
  double best_cost = std::numeric_limits<double>::infinity();

  for (std::uint64_t idx = lo;;) {
    if (n_over == 0 && cost < best_cost) {
      best_cost = cost;
      best.found = true;
      best.index = idx;
      best.placement = pl;
    }
    if (++idx >= hi) break;
    // Mixed-radix increment; a carry resets trailing digits to server 0.
    bool carried = false;
    for (std::size_t j = K; j-- > 0;) {
      const auto from = static_cast<std::size_t>(pl[j]);
      const std::size_t to = from + 1 < S ? from + 1 : 0;
      if (!carried && to != 0) cost += [&] {
        const auto d = move_delta(inst, pl, j, static_cast<int>(to));
        return d.offload + d.communication;
      }();
      pl[j] = static_cast<int>(to);
      loads.move(samples, j, from, to);
      recount(from);
      recount(to);
      if (to != 0) break;
      carried = true;
    }
    // Multi-digit changes get a fresh evaluation, which also bounds drift.
    if (carried) cost = evaluate(inst, pl).total;
  }
  return best;
}

}  // namespace

std::uint64_t placement_count(const Instance& inst) {
  std::uint64_t n = 1;
  const std::uint64_t S = inst.num_servers();
  for (std::size_t k = 0; k < inst.num_components(); ++k) {
    if (S != 0 && n > std::numeric_limits<std::uint64_t>::max() / S)
      return std::numeric_limits<std::uint64_t>::max();
    n *= S;
  }
  return n;
}

OracleResult exact_solve(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                         std::uint64_t size_cap, Exec exec) {
  params.validate();
  const std::uint64_t total = placement_count(inst);
  if (total > size_cap)
    throw SizeCapExceeded("instance has " + std::to_string(total) +
                          " placements, above the exact-solve cap of " + std::to_string(size_cap));
  const int threshold = params.overload_threshold(samples.theta());

  const int workers = exec == Exec::parallel ? std::max(1, omp_get_max_threads()) : 1;
  const auto chunks = static_cast<std::uint64_t>(std::min<std::uint64_t>(
      static_cast<std::uint64_t>(workers) * 4, std::max<std::uint64_t>(1, total / 4096)));
  std::vector<ChunkBest> found(static_cast<std::size_t>(chunks));
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel && chunks > 1)
  for (long c = 0; c < static_cast<long>(chunks); ++c) {
    const auto uc = static_cast<std::uint64_t>(c);
    found[static_cast<std::size_t>(c)] =
        enumerate_chunk(inst, samples, threshold, total * uc / chunks, total * (uc + 1) / chunks);
  }

  // Chunk winners compared on exact cost; equal cost keeps the lower index.
  OracleResult res;
  res.states_enumerated = total;
  std::uint64_t best_index = 0;
  for (const auto& fb : found) {
    if (!fb.found) continue;
    const double cost = evaluate(inst, fb.placement).total;
    if (!res.optimum || cost < *res.optimum || (cost == *res.optimum && fb.index < best_index)) {
      res.optimum = cost;
      res.argmin = fb.placement;
      best_index = fb.index;
    }
  }
  return res;
}

}  // namespace dtplace
