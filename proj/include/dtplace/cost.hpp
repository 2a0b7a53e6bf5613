#pragma once

#include <cstddef>
#include <vector>

#include "dtplace/domain.hpp"

namespace dtplace {

/// Total map component -> server, stored by flat component index. Exactly one
/// server per component holds by construction.
class Placement {
 public:
  Placement() = default;
  explicit Placement(std::vector<int> servers) : server_(std::move(servers)) {}
  /// Every component on server `s`.
  static Placement uniform(const Instance& inst, int s) {
    return Placement(std::vector<int>(inst.num_components(), s));
  }

  int operator[](std::size_t k) const { return server_[k]; }
  int& operator[](std::size_t k) { return server_[k]; }
  int at(const Instance& inst, std::size_t d, std::size_t c) const {
    return server_[inst.flat_index(d, c)];
  }
  std::size_t size() const { return server_.size(); }
  const std::vector<int>& servers() const { return server_; }

  auto operator<=>(const Placement&) const = default;

 private:
  std::vector<int> server_;
};

struct CostBreakdown {
  double offload = 0.0;
  double communication = 0.0;
  double total = 0.0;
};

struct FeatureVector {
  double dist_off = 0.0;
  double dist_com = 0.0;
  bool operator==(const FeatureVector&) const = default;
};

/// delta_{sc}^d = e_s^d * h_c^d * r
double offloading_cost(const Instance& inst, std::size_t d, std::size_t c, std::size_t s);
/// tau_{ss'cc'}^d = l_ss' * g_cc'^d * r
double communication_cost(const Instance& inst, std::size_t d, std::size_t c, std::size_t c2,
                          std::size_t s, std::size_t s2);

/// Throws ContractViolation if `pl` does not cover `inst` or names an unknown server.
void check_placement(const Instance& inst, const Placement& pl);

/// Communication is summed over ordered sibling pairs (each unordered pair
/// counts twice).
CostBreakdown evaluate(const Instance& inst, const Placement& pl);
FeatureVector features(const Instance& inst, const Placement& pl);

/// Change in cost and features when component k moves to server `to`.
struct MoveDelta {
  double offload = 0.0;
  double communication = 0.0;
  double dist_off = 0.0;
  double dist_com = 0.0;
};

MoveDelta move_delta(const Instance& inst, const Placement& pl, std::size_t k, int to);

}  // namespace dtplace
