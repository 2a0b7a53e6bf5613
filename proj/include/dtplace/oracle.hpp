#pragma once

#include <cstdint>
#include <optional>

#include "dtplace/kernels.hpp"
#include "dtplace/local_search.hpp"

namespace dtplace {

struct OracleResult {
  std::optional<double> optimum;  // empty when no placement is feasible
  Placement argmin;
  std::uint64_t states_enumerated = 0;

  bool feasible() const { return optimum.has_value(); }
};

/// S^(sum C_d), saturating at UINT64_MAX.
std::uint64_t placement_count(const Instance& inst);

/// Exhaustive search over every placement. Ties go to the lexicographically
/// smallest placement. Throws SizeCapExceeded above `size_cap` placements.
OracleResult exact_solve(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                         std::uint64_t size_cap = 2'000'000, Exec exec = default_exec());

}  // namespace dtplace
