#include "dtplace/cost.hpp"

#include <string>

#include "dtplace/error.hpp"

namespace dtplace {

namespace {

void check_index(bool ok, const char* what) {
  if (!ok) throw ContractViolation(std::string("index out of range: ") + what);
}

}  // namespace

double offloading_cost(const Instance& inst, std::size_t d, std::size_t c, std::size_t s) {
  check_index(d < inst.num_devices(), "device");
  check_index(c < inst.devices()[d].components.size(), "component");
  check_index(s < inst.num_servers(), "server");
  return inst.server_device_distance(s, d) * inst.devices()[d].components[c].offload_kb *
         inst.unit_transport_cost();
}

double communication_cost(const Instance& inst, std::size_t d, std::size_t c, std::size_t c2,
                          std::size_t s, std::size_t s2) {
  check_index(d < inst.num_devices(), "device");
  const auto& comps = inst.devices()[d].components;
  check_index(c < comps.size() && c2 < comps.size(), "component");
  check_index(s < inst.num_servers() && s2 < inst.num_servers(), "server");
  return inst.server_server_distance(s, s2) * comps[c].exchange_kb[c2] *
         inst.unit_transport_cost();
}

void check_placement(const Instance& inst, const Placement& pl) {
  if (pl.size() != inst.num_components())
    throw ContractViolation("placement covers " + std::to_string(pl.size()) + " of " +
                            std::to_string(inst.num_components()) + " components");
  const auto S = static_cast<int>(inst.num_servers());
  for (std::size_t k = 0; k < pl.size(); ++k)
    if (pl[k] < 0 || pl[k] >= S)
      throw ContractViolation("placement assigns component " + std::to_string(k) +
                              " to unknown server " + std::to_string(pl[k]));
}

CostBreakdown evaluate(const Instance& inst, const Placement& pl) {
  check_placement(inst, pl);
  const double r = inst.unit_transport_cost();
  CostBreakdown out;
  // Weighted sums first, one multiplication by r at the end.
  double off = 0.0;
  double com = 0.0;
  for (std::size_t d = 0; d < inst.num_devices(); ++d) {
    const auto& comps = inst.devices()[d].components;
    const std::size_t base = inst.device_offset(d);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      const auto s = static_cast<std::size_t>(pl[base + c]);
      off += inst.server_device_distance(s, d) * comps[c].offload_kb;
      for (std::size_t c2 = 0; c2 < comps.size(); ++c2) {
        if (c2 == c) continue;
        com += inst.server_server_distance(s, static_cast<std::size_t>(pl[base + c2])) *
               comps[c].exchange_kb[c2];
      }
    }
  }
  out.offload = off * r;
  out.communication = com * r;
  out.total = out.offload + out.communication;
  return out;
}

FeatureVector features(const Instance& inst, const Placement& pl) {
  check_placement(inst, pl);
  FeatureVector f;
  for (std::size_t d = 0; d < inst.num_devices(); ++d) {
    const std::size_t n = inst.devices()[d].components.size();
    const std::size_t base = inst.device_offset(d);
    for (std::size_t c = 0; c < n; ++c) {
      const auto s = static_cast<std::size_t>(pl[base + c]);
      f.dist_off += inst.server_device_distance(s, d);
      for (std::size_t c2 = 0; c2 < n; ++c2)
        if (c2 != c)
          f.dist_com += inst.server_server_distance(s, static_cast<std::size_t>(pl[base + c2]));
    }
  }
  return f;
}

MoveDelta move_delta(const Instance& inst, const Placement& pl, std::size_t k, int to) {
  const auto from = static_cast<std::size_t>(pl[k]);
  const auto dst = static_cast<std::size_t>(to);
  const std::size_t d = inst.device_of(k);
  const std::size_t c = inst.local_of(k);
  const auto& comps = inst.devices()[d].components;
  const std::size_t base = inst.device_offset(d);
  const double r = inst.unit_transport_cost();

  MoveDelta out;
  out.dist_off = inst.server_device_distance(dst, d) - inst.server_device_distance(from, d);
  out.offload = out.dist_off * comps[c].offload_kb * r;
  double com = 0.0;
  double dist = 0.0;
  for (std::size_t c2 = 0; c2 < comps.size(); ++c2) {
    if (c2 == c) continue;
    const auto other = static_cast<std::size_t>(pl[base + c2]);
    const double dl =
        inst.server_server_distance(dst, other) - inst.server_server_distance(from, other);
    com += dl * comps[c].exchange_kb[c2];
    dist += dl;
  }
  // Both orientations of every touched pair change.
  out.communication = 2.0 * com * r;
  out.dist_com = 2.0 * dist;
  return out;
}

}  // namespace dtplace
