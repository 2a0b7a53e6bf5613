#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtplace/cost.hpp"
#include "dtplace/domain.hpp"

namespace dtplace {

struct SaaParams {
  double alpha = 0.01;    // risk level of the chance constraint
  double epsilon = 0.005; // risk level of the sampled constraint
  int theta = 1850;       // number of Monte Carlo scenarios

  void validate() const;  // throws ConfigError
  /// Largest number of overloaded scenarios a server may have: floor(eps * theta).
  int overload_threshold() const { return overload_threshold(theta); }
  int overload_threshold(int num_scenarios) const;
};

/// Sampled CPU-cycle demands, component-major: cycles(k, theta) for flat
/// component k. Cycle counts are whole numbers >= 1, so per-server sums are
/// exact in integer arithmetic and independent of summation order.
class SampleSet {
 public:
  SampleSet() = default;
  SampleSet(std::size_t components, int theta, std::vector<std::int64_t> cycles,
            std::uint64_t seed = 0);

  std::size_t num_components() const { return components_; }
  int theta() const { return theta_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t operator()(std::size_t k, int t) const {
    return cycles_[k * static_cast<std::size_t>(theta_) + static_cast<std::size_t>(t)];
  }
  const std::int64_t* row(std::size_t k) const {
    return cycles_.data() + k * static_cast<std::size_t>(theta_);
  }
  const std::vector<std::int64_t>& raw() const { return cycles_; }

  bool operator==(const SampleSet&) const = default;

 private:
  std::size_t components_ = 0;
  int theta_ = 0;
  std::vector<std::int64_t> cycles_;
  std::uint64_t seed_ = 0;
};

/// Per-server cycle totals for every scenario: sum of sampled cycles of the
/// components placed on the server. Load in cost units is m_s times this.
class LoadTable {
 public:
  LoadTable() = default;
  LoadTable(const Instance& inst, const SampleSet& samples, const Placement& pl);

  std::size_t num_servers() const { return servers_; }
  int theta() const { return theta_; }
  const std::int64_t* row(std::size_t s) const {
    return sums_.data() + s * static_cast<std::size_t>(theta_);
  }
  std::int64_t* row(std::size_t s) { return sums_.data() + s * static_cast<std::size_t>(theta_); }
  /// Applies the move of flat component k from server `from` to `to`.
  void move(const SampleSet& samples, std::size_t k, std::size_t from, std::size_t to);

  bool operator==(const LoadTable&) const = default;

 private:
  std::size_t servers_ = 0;
  int theta_ = 0;
  std::vector<std::int64_t> sums_;
};

struct OverloadProfile {
  int theta = 0;
  std::vector<int> overload_count;
  std::vector<double> proportion;
  std::vector<double> worst_excess;

  double max_proportion() const;
  bool operator==(const OverloadProfile&) const = default;
};

SampleSet draw_samples(const Instance& inst, const SaaParams& params, std::uint64_t seed,
                       double rel_sd = 0.2);

/// Computation cost of server s in scenario t.
double server_load(const Instance& inst, const SampleSet& samples, const Placement& pl,
                   std::size_t s, int t);
/// server_load - T_s; positive means overload.
double overload_excess(const Instance& inst, const SampleSet& samples, const Placement& pl,
                       std::size_t s, int t);

OverloadProfile overload_profile(const Instance& inst, const SampleSet& samples,
                                 const Placement& pl, const SaaParams& params);
OverloadProfile overload_profile(const Instance& inst, const LoadTable& loads);

bool is_feasible(const OverloadProfile& profile, const SaaParams& params);

/// 1 - exp(-theta (alpha - eps)^2 / (2 eps))
double approx_success_prob(const SaaParams& params);

}  // namespace dtplace
