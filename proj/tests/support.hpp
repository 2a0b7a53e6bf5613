#pragma once

// Builders and independent reference implementations shared by the tests.
// The oracles here deliberately avoid the library's flat indexing and delta
// arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "dtplace/cost.hpp"
#include "dtplace/domain.hpp"
#include "dtplace/rng.hpp"
#include "dtplace/saa.hpp"

namespace testing {

using namespace dtplace;

inline EdgeServer server(double x, double y, double m = 1.0, double capacity = 1e18) {
  return {{x, y}, m, capacity};
}

/// Device whose components all share one mean; `g` is the full exchange matrix.
inline PhysicalDevice device(double x, double y, std::vector<double> h,
                             std::vector<std::vector<double>> g = {}, double mean = 1e6) {
  PhysicalDevice d;
  d.position = {x, y};
  const std::size_t n = h.size();
  if (g.empty()) g.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < n; ++c) d.components.push_back({mean, h[c], g[c]});
  return d;
}

/// Every scenario of component k uses cycles[k][t].
inline SampleSet fixed_samples(const std::vector<std::vector<std::int64_t>>& cycles) {
  const int theta = cycles.empty() ? 0 : static_cast<int>(cycles.front().size());
  std::vector<std::int64_t> flat;
  for (const auto& row : cycles) flat.insert(flat.end(), row.begin(), row.end());
  return SampleSet(cycles.size(), theta, std::move(flat));
}

inline GenConfig small_config(Rng& rng, int max_servers = 3, int max_devices = 3,
                              int max_components = 3) {
  GenConfig cfg;
  cfg.num_servers = std::uniform_int_distribution<int>(1, max_servers)(rng);
  cfg.num_devices = std::uniform_int_distribution<int>(1, max_devices)(rng);
  cfg.components_lo = 1;
  cfg.components_hi = std::uniform_int_distribution<int>(1, max_components)(rng);
  return cfg;
}

inline Placement random_placement(const Instance& inst, Rng& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(inst.num_servers()) - 1);
  std::vector<int> v(inst.num_components());
  for (auto& s : v) s = pick(rng);
  return Placement(std::move(v));
}

// x[d][c][s] and y[d][s][s'][c][c'] spelled out, then both cost sums taken literally.
struct ExplicitCost {
  double offload = 0.0;
  double communication = 0.0;
  double dist_off = 0.0;
  double dist_com = 0.0;
};

inline ExplicitCost explicit_y_cost(const Instance& inst, const Placement& pl) {
  const std::size_t S = inst.num_servers();
  const double r = inst.unit_transport_cost();
  ExplicitCost out;
  std::size_t k0 = 0;
  for (std::size_t d = 0; d < inst.num_devices(); ++d) {
    const auto& dev = inst.devices()[d];
    const std::size_t C = dev.components.size();
    std::vector<std::vector<int>> x(C, std::vector<int>(S, 0));
    for (std::size_t c = 0; c < C; ++c) x[c][static_cast<std::size_t>(pl[k0 + c])] = 1;
    for (std::size_t s = 0; s < S; ++s) {
      const double e = std::abs(inst.servers()[s].position.x - dev.position.x) +
                       std::abs(inst.servers()[s].position.y - dev.position.y);
      for (std::size_t c = 0; c < C; ++c) {
        out.offload += e * dev.components[c].offload_kb * r * x[c][s];
        out.dist_off += e * x[c][s];
      }
    }
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t s2 = 0; s2 < S; ++s2) {
        const auto& a = inst.servers()[s].position;
        const auto& b = inst.servers()[s2].position;
        const double l = std::abs(a.x - b.x) + std::abs(a.y - b.y);
        for (std::size_t c = 0; c < C; ++c)
          for (std::size_t c2 = 0; c2 < C; ++c2) {
            if (c == c2) continue;
            const int y = x[c][s] * x[c2][s2];
            out.communication += l * dev.components[c].exchange_kb[c2] * r * y;
            out.dist_com += l * y;
          }
      }
    k0 += C;
  }
  return out;
}

// Overload count of every server by scanning each (s, theta) cell and adding
// the demand of every component placed there.
inline std::vector<int> brute_overloads(const Instance& inst, const SampleSet& samples,
                                        const Placement& pl) {
  std::vector<int> count(inst.num_servers(), 0);
  for (std::size_t s = 0; s < inst.num_servers(); ++s)
    for (int t = 0; t < samples.theta(); ++t) {
      std::int64_t cycles = 0;
      for (std::size_t k = 0; k < pl.size(); ++k)
        if (pl[k] == static_cast<int>(s)) cycles += samples(k, t);
      const double load = inst.servers()[s].cost_per_cycle * static_cast<double>(cycles);
      if (load - inst.servers()[s].capacity > 0.0) ++count[s];
    }
  return count;
}

inline bool brute_feasible(const Instance& inst, const SampleSet& samples, const Placement& pl,
                           double epsilon) {
  const auto limit = static_cast<int>(std::floor(epsilon * samples.theta() * (1.0 + 1e-12)));
  for (int c : brute_overloads(inst, samples, pl))
    if (c > limit) return false;
  return true;
}

/// Visits every placement in lexicographic order.
inline void for_each_placement(const Instance& inst,
                               const std::function<void(const Placement&)>& fn) {
  const std::size_t K = inst.num_components();
  const int S = static_cast<int>(inst.num_servers());
  std::vector<int> v(K, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == K) {
      fn(Placement(v));
      return;
    }
    for (int s = 0; s < S; ++s) {
      v[k] = s;
      rec(k + 1);
    }
  };
  rec(0);
}

struct NaiveOptimum {
  std::optional<double> value;
  Placement argmin;
};

inline NaiveOptimum naive_optimum(const Instance& inst, const SampleSet& samples,
                                  double epsilon) {
  NaiveOptimum best;
  for_each_placement(inst, [&](const Placement& pl) {
    if (!brute_feasible(inst, samples, pl, epsilon)) return;
    const auto c = explicit_y_cost(inst, pl);
    const double v = c.offload + c.communication;
    if (!best.value || v < *best.value) {
      best.value = v;
      best.argmin = pl;
    }
  });
  return best;
}

inline bool close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing
