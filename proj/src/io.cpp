#include "dtplace/io.hpp"

#include <fstream>

#include "dtplace/error.hpp"

namespace dtplace::io {

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

// Wraps nlohmann parse/type errors as configuration errors.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed ") + what + ": " + e.what());
  }
}

}  // namespace

json to_json(const Instance& inst) {
  json servers = json::array();
  for (const auto& s : inst.servers())
    servers.push_back({{"x", s.position.x},
                       {"y", s.position.y},
                       {"cost_per_cycle", s.cost_per_cycle},
                       {"capacity", s.capacity}});
  json devices = json::array();
  for (const auto& d : inst.devices()) {
    json comps = json::array();
    for (const auto& c : d.components)
      comps.push_back({{"mean_cycles", c.mean_cycles},
                       {"offload_kb", c.offload_kb},
                       {"exchange_kb", c.exchange_kb}});
    devices.push_back({{"x", d.position.x}, {"y", d.position.y}, {"components", comps}});
  }
  return {{"format", "dtplace-instance"},
          {"seed", inst.seed()},
          {"unit_transport_cost", inst.unit_transport_cost()},
          {"servers", servers},
          {"devices", devices}};
}

Instance instance_from_json(const json& j) {
  Instance inst = guarded("instance", [&] {
    std::vector<EdgeServer> servers;
    for (const auto& s : j.at("servers"))
      servers.push_back({{s.at("x").get<double>(), s.at("y").get<double>()},
                         s.at("cost_per_cycle").get<double>(),
                         s.at("capacity").get<double>()});
    std::vector<PhysicalDevice> devices;
    for (const auto& d : j.at("devices")) {
      PhysicalDevice dev;
      dev.position = {d.at("x").get<double>(), d.at("y").get<double>()};
      for (const auto& c : d.at("components"))
        dev.components.push_back({c.at("mean_cycles").get<double>(),
                                  c.at("offload_kb").get<double>(),
                                  c.at("exchange_kb").get<std::vector<double>>()});
      devices.push_back(std::move(dev));
    }
    return Instance::with_computed_distances(std::move(servers), std::move(devices),
                                             j.at("unit_transport_cost").get<double>(),
                                             get_or<std::uint64_t>(j, "seed", 0));
  });
  const auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw ConfigError(msg);
  }
  return inst;
}

json to_json(const Instance& inst, const Placement& pl) {
  check_placement(inst, pl);
  json triples = json::array();
  for (std::size_t k = 0; k < pl.size(); ++k)
    triples.push_back({inst.device_of(k), inst.local_of(k), pl[k]});
  return {{"format", "dtplace-placement"}, {"placement", triples}};
}

Placement placement_from_json(const Instance& inst, const json& j) {
  return guarded("placement", [&] {
    std::vector<int> servers(inst.num_components(), -1);
    for (const auto& t : j.at("placement")) {
      const auto d = t.at(0).get<std::size_t>();
      const auto c = t.at(1).get<std::size_t>();
      if (d >= inst.num_devices() || c >= inst.devices()[d].components.size())
        throw ConfigError("placement names unknown component (" + std::to_string(d) + ", " +
                          std::to_string(c) + ")");
      int& slot = servers[inst.flat_index(d, c)];
      if (slot != -1)
        throw ConfigError("placement assigns component (" + std::to_string(d) + ", " +
                          std::to_string(c) + ") twice");
      slot = t.at(2).get<int>();
    }
    Placement pl(std::move(servers));
    try {
      check_placement(inst, pl);
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
    return pl;
  });
}

json to_json(const SampleSet& samples) {
  return {{"format", "dtplace-samples"},
          {"seed", samples.seed()},
          {"components", samples.num_components()},
          {"theta", samples.theta()},
          {"layout", "component-major"},
          {"cycles", samples.raw()}};
}

SampleSet samples_from_json(const json& j) {
  return guarded("sample set", [&] {
    try {
      return SampleSet(j.at("components").get<std::size_t>(), j.at("theta").get<int>(),
                       j.at("cycles").get<std::vector<std::int64_t>>(),
                       get_or<std::uint64_t>(j, "seed", 0));
    } catch (const ContractViolation& e) {
      throw ConfigError(e.what());
    }
  });
}

ExperimentConfig experiment_config_from_json(const json& j) {
  return guarded("experiment config", [&] {
    ExperimentConfig cfg;
    const auto axis = get_or<std::string>(j, "axis", "devices");
    if (axis == "servers") {
      cfg.axis = SweepAxis::servers;
      cfg.values = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    } else if (axis == "devices") {
      cfg.axis = SweepAxis::devices;
    } else {
      throw ConfigError("axis must be \"servers\" or \"devices\"");
    }
    cfg.values = get_or(j, "values", cfg.values);
    cfg.fixed_servers = get_or(j, "servers", cfg.fixed_servers);
    cfg.fixed_devices = get_or(j, "devices", cfg.fixed_devices);
    if (j.contains("components")) {
      const auto range = j.at("components").get<std::vector<int>>();
      if (range.size() != 2) throw ConfigError("components must be [lo, hi]");
      cfg.components_lo = range[0];
      cfg.components_hi = range[1];
    }
    cfg.replications = get_or(j, "replications", cfg.replications);
    cfg.master_seed = get_or(j, "master_seed", cfg.master_seed);
    cfg.saa.alpha = get_or(j, "alpha", cfg.saa.alpha);
    cfg.saa.epsilon = get_or(j, "epsilon", cfg.saa.epsilon);
    cfg.saa.theta = get_or(j, "theta", cfg.saa.theta);
    cfg.stage.delta = get_or(j, "delta", cfg.stage.delta);
    cfg.stage.max_iterations = get_or(j, "max_iterations", cfg.stage.max_iterations);
    cfg.stage.phase2_step_cap = get_or(j, "phase2_step_cap", cfg.stage.phase2_step_cap);
    cfg.stage.restart_on_stall = get_or(j, "restart_on_stall", cfg.stage.restart_on_stall);
    cfg.baseline_trials = get_or(j, "baseline_trials", cfg.baseline_trials);
    if (j.contains("neighborhood"))
      cfg.stage.neighborhood = neighborhood_from_string(j.at("neighborhood").get<std::string>());
    return cfg;
  });
}

json to_json(const ExperimentConfig& cfg) {
  return {{"axis", cfg.axis == SweepAxis::servers ? "servers" : "devices"},
          {"values", cfg.values},
          {"servers", cfg.fixed_servers},
          {"devices", cfg.fixed_devices},
          {"components", {cfg.components_lo, cfg.components_hi}},
          {"replications", cfg.replications},
          {"master_seed", cfg.master_seed},
          {"alpha", cfg.saa.alpha},
          {"epsilon", cfg.saa.epsilon},
          {"theta", cfg.saa.theta},
          {"delta", cfg.stage.delta},
          {"max_iterations", cfg.stage.max_iterations},
          {"phase2_step_cap", cfg.stage.phase2_step_cap},
          {"restart_on_stall", cfg.stage.restart_on_stall},
          {"neighborhood", to_string(cfg.stage.neighborhood)},
          {"baseline_trials", cfg.baseline_trials}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << j.dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace dtplace::io
