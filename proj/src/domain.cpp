#include "dtplace/domain.hpp"

#include <cmath>
#include <random>

#include "dtplace/error.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

double manhattan(const Point& p, const Point& q) {
  return std::abs(p.x - q.x) + std::abs(p.y - q.y);
}

Instance::Instance(std::vector<EdgeServer> servers, std::vector<PhysicalDevice> devices,
                   double unit_transport_cost, Matrix server_device, Matrix server_server,
                   std::uint64_t seed)
    : servers_(std::move(servers)),
      devices_(std::move(devices)),
      unit_cost_(unit_transport_cost),
      dist_sd_(std::move(server_device)),
      dist_ss_(std::move(server_server)),
      seed_(seed) {
  index_components();
}

Instance Instance::with_computed_distances(std::vector<EdgeServer> servers,
                                           std::vector<PhysicalDevice> devices,
                                           double unit_transport_cost, std::uint64_t seed) {
  Matrix sd(servers.size(), devices.size());
  Matrix ss(servers.size(), servers.size());
  for (std::size_t s = 0; s < servers.size(); ++s) {
    for (std::size_t d = 0; d < devices.size(); ++d)
      sd(s, d) = manhattan(servers[s].position, devices[d].position);
    for (std::size_t t = 0; t < servers.size(); ++t)
      ss(s, t) = manhattan(servers[s].position, servers[t].position);
  }
  return Instance(std::move(servers), std::move(devices), unit_transport_cost, std::move(sd),
                  std::move(ss), seed);
}

void Instance::index_components() {
  offset_.clear();
  comp_device_.clear();
  offset_.reserve(devices_.size() + 1);
  for (std::size_t d = 0; d < devices_.size(); ++d) {
    offset_.push_back(comp_device_.size());
    comp_device_.insert(comp_device_.end(), devices_[d].components.size(), d);
  }
  offset_.push_back(comp_device_.size());
}

bool Instance::operator==(const Instance& o) const {
  auto same_point = [](const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; };
  if (servers_.size() != o.servers_.size() || devices_.size() != o.devices_.size()) return false;
  for (std::size_t s = 0; s < servers_.size(); ++s) {
    const auto& a = servers_[s];
    const auto& b = o.servers_[s];
    if (!same_point(a.position, b.position) || a.cost_per_cycle != b.cost_per_cycle ||
        a.capacity != b.capacity)
      return false;
  }
  for (std::size_t d = 0; d < devices_.size(); ++d) {
    const auto& a = devices_[d];
    const auto& b = o.devices_[d];
    if (!same_point(a.position, b.position) || a.components.size() != b.components.size())
      return false;
    for (std::size_t c = 0; c < a.components.size(); ++c) {
      const auto& x = a.components[c];
      const auto& y = b.components[c];
      if (x.mean_cycles != y.mean_cycles || x.offload_kb != y.offload_kb ||
          x.exchange_kb != y.exchange_kb)
        return false;
    }
  }
  return unit_cost_ == o.unit_cost_ && dist_sd_ == o.dist_sd_ && dist_ss_ == o.dist_ss_ &&
         seed_ == o.seed_;
}

void GenConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("invalid generator config: " + msg); };
  if (num_servers < 1) fail("num_servers must be >= 1");
  if (num_devices < 1) fail("num_devices must be >= 1");
  if (components_lo < 1) fail("components lower bound must be >= 1");
  if (components_hi < components_lo) fail("components upper bound below lower bound");
  if (!(area_side > 0.0)) fail("area_side must be > 0");
  auto check_range = [&](const Range& r, const char* name, bool allow_zero_lo) {
    if (!(r.hi > r.lo)) fail(std::string(name) + " range is degenerate");
    if (allow_zero_lo ? r.lo < 0.0 : !(r.lo > 0.0))
      fail(std::string(name) + " range must be positive");
  };
  check_range(server_mean_cost, "server_mean_cost", false);
  check_range(capacity, "capacity", false);
  check_range(device_mean_cycles, "device_mean_cycles", false);
  check_range(offload_kb, "offload_kb", false);
  check_range(exchange_kb, "exchange_kb", true);
  check_range(unit_cost, "unit_cost", true);
  if (!(server_cost_rel_sd >= 0.0) || !(cycles_rel_sd >= 0.0)) fail("negative relative sd");
}

// Draw order on the "instance" stream: r, then per server (x, y, mu_s, m_s,
// T_s), then per device (x, y, C_d, mu_d, h for each component, upper
// triangle of g row by row).
Instance generate_instance(const GenConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng = make_stream(seed, "instance");
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const double r = uniform(cfg.unit_cost.lo, cfg.unit_cost.hi);

  std::vector<EdgeServer> servers(static_cast<std::size_t>(cfg.num_servers));
  for (auto& srv : servers) {
    srv.position = {uniform(0.0, cfg.area_side), uniform(0.0, cfg.area_side)};
    const double mu = uniform(cfg.server_mean_cost.lo, cfg.server_mean_cost.hi);
    srv.cost_per_cycle = positive_normal(rng, mu, cfg.server_cost_rel_sd * mu);
    srv.capacity = uniform(cfg.capacity.lo, cfg.capacity.hi);
  }

  std::vector<PhysicalDevice> devices(static_cast<std::size_t>(cfg.num_devices));
  for (auto& dev : devices) {
    dev.position = {uniform(0.0, cfg.area_side), uniform(0.0, cfg.area_side)};
    const auto n = static_cast<std::size_t>(
        std::uniform_int_distribution<int>(cfg.components_lo, cfg.components_hi)(rng));
    const double mu = uniform(cfg.device_mean_cycles.lo, cfg.device_mean_cycles.hi);
    dev.components.resize(n);
    for (auto& comp : dev.components) {
      comp.mean_cycles = mu;
      comp.offload_kb = uniform(cfg.offload_kb.lo, cfg.offload_kb.hi);
      comp.exchange_kb.assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double g = uniform(cfg.exchange_kb.lo, cfg.exchange_kb.hi);
        dev.components[i].exchange_kb[j] = g;
        dev.components[j].exchange_kb[i] = g;
      }
  }
  return Instance::with_computed_distances(std::move(servers), std::move(devices), r, seed);
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  auto report = [&out](const std::string& what) { out.push_back(what); };
  const auto S = inst.num_servers();
  const auto D = inst.num_devices();
  if (S == 0) report("no edge servers");
  if (D == 0) report("no physical devices");
  if (!(inst.unit_transport_cost() >= 0.0)) report("unit transport cost negative");

  for (std::size_t s = 0; s < S; ++s) {
    const auto& srv = inst.servers()[s];
    if (!(srv.cost_per_cycle > 0.0))
      report("server " + std::to_string(s) + ": cost_per_cycle must be > 0");
    if (!(srv.capacity > 0.0)) report("server " + std::to_string(s) + ": capacity must be > 0");
  }

  for (std::size_t d = 0; d < D; ++d) {
    const auto& dev = inst.devices()[d];
    const auto n = dev.components.size();
    const std::string tag = "device " + std::to_string(d);
    if (n == 0) report(tag + ": has no components");
    bool bad_length = false;
    for (std::size_t c = 0; c < n; ++c) {
      const auto& comp = dev.components[c];
      const std::string ctag = tag + " component " + std::to_string(c);
      if (!(comp.mean_cycles > 0.0)) report(ctag + ": mean_cycles must be > 0");
      if (!(comp.offload_kb > 0.0)) report(ctag + ": offload_kb must be > 0");
      if (comp.exchange_kb.size() != n) {
        report(ctag + ": exchange vector length mismatch");
        bad_length = true;
      }
    }
    if (bad_length) continue;
    bool asym = false;
    bool diag = false;
    bool neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (dev.components[i].exchange_kb[i] != 0.0) diag = true;
      for (std::size_t j = 0; j < n; ++j) {
        if (dev.components[i].exchange_kb[j] != dev.components[j].exchange_kb[i]) asym = true;
        if (dev.components[i].exchange_kb[j] < 0.0) neg = true;
      }
    }
    if (asym) report(tag + ": exchange matrix asymmetric");
    if (diag) report(tag + ": exchange matrix has nonzero self-exchange");
    if (neg) report(tag + ": exchange matrix has negative entries");
  }

  const auto& sd = inst.dist_server_device();
  const auto& ss = inst.dist_server_server();
  if (sd.rows() != S || sd.cols() != D) {
    report("server-device distance matrix has wrong shape");
  } else {
    bool stale = false;
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t d = 0; d < D; ++d)
        if (sd(s, d) != manhattan(inst.servers()[s].position, inst.devices()[d].position))
          stale = true;
    if (stale) report("server-device distance matrix stale");
  }
  if (ss.rows() != S || ss.cols() != S) {
    report("server-server distance matrix has wrong shape");
  } else {
    bool stale = false;
    bool asym = false;
    bool diag = false;
    for (std::size_t s = 0; s < S; ++s) {
      if (ss(s, s) != 0.0) diag = true;
      for (std::size_t t = 0; t < S; ++t) {
        if (ss(s, t) != manhattan(inst.servers()[s].position, inst.servers()[t].position))
          stale = true;
        if (ss(s, t) != ss(t, s)) asym = true;
      }
    }
    if (stale) report("distance matrix stale");
    if (asym) report("server-server distance matrix asymmetric");
    if (diag) report("server-server distance matrix has nonzero diagonal");
  }
  return out;
}

}  // namespace dtplace
