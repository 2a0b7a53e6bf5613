#include "dtplace/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dtplace/error.hpp"
#include "dtplace/format.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

void ExperimentConfig::validate() const {
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (baseline_trials < 1) throw ConfigError("baseline_trials must be >= 1");
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  saa.validate();
  stage.validate();
  auto within = [this](int lo, int hi) {
    return std::all_of(values.begin(), values.end(), [=](int v) { return v >= lo && v <= hi; });
  };
  if (axis == SweepAxis::servers) {
    if (!within(2, 10)) throw ConfigError("server sweep values must lie in 2..10");
    if (fixed_devices != 5 && fixed_devices != 10)
      throw ConfigError("server sweep uses 5 or 10 devices");
    if (components_lo != 1 || components_hi != 3)
      throw ConfigError("server sweep uses components in [1,3]");
  } else {
    if (!within(5, 10)) throw ConfigError("device sweep values must lie in 5..10");
    if (fixed_servers != 6) throw ConfigError("device sweep uses 6 servers");
    if (components_lo != 1 || (components_hi != 3 && components_hi != 5))
      throw ConfigError("device sweep uses components in [1,3] or [1,5]");
  }
}

std::string Cell::key() const {
  return "S" + std::to_string(servers) + "-D" + std::to_string(devices) + "-C" +
         std::to_string(components_lo) + "_" + std::to_string(components_hi);
}

std::vector<Cell> cells(const ExperimentConfig& cfg) {
  std::vector<Cell> out;
  for (int v : cfg.values) {
    Cell c;
    c.servers = cfg.axis == SweepAxis::servers ? v : cfg.fixed_servers;
    c.devices = cfg.axis == SweepAxis::devices ? v : cfg.fixed_devices;
    c.components_lo = cfg.components_lo;
    c.components_hi = cfg.components_hi;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RunSeeds run_seeds(std::uint64_t master_seed, const Cell& cell, int replication) {
  const std::uint64_t base =
      stream_seed(master_seed, "cell:" + cell.key(), static_cast<std::uint64_t>(replication));
  return {stream_seed(base, "instance"), stream_seed(base, "samples"),
          stream_seed(base, "algorithms")};
}

namespace {

struct RunOutput {
  std::vector<RunRecord> records;
  ConvergenceLog log;
};

RunOutput run_one(const ExperimentConfig& cfg, const Cell& cell, int rep) {
  const RunSeeds seeds = run_seeds(cfg.master_seed, cell, rep);
  GenConfig gen;
  gen.num_servers = cell.servers;
  gen.num_devices = cell.devices;
  gen.components_lo = cell.components_lo;
  gen.components_hi = cell.components_hi;
  const Instance inst = generate_instance(gen, seeds.instance);
  const SampleSet samples = draw_samples(inst, cfg.saa, seeds.samples);

  RunOutput out;
  out.log.run_id = cell.key() + "-r" + std::to_string(rep);
  auto record = [&](const char* id, auto&& solve) {
    RunRecord r;
    r.cell = cell;
    r.replication = rep;
    r.algorithm = id;
    try {
      solve(r);
      r.feasible = true;
      r.cost_per_server = r.total_cost / cell.servers;
    } catch (const NoFeasibleState&) {
      r.feasible = false;
    }
    out.records.push_back(std::move(r));
  };

  const auto T = static_cast<double>(cfg.baseline_trials);
  record(algo::random_best, [&](RunRecord& r) {
    const auto b = baseline_random_best(inst, samples, cfg.saa, cfg.baseline_trials, seeds.algorithms);
    r.total_cost = b.best_state.eval.total;
    r.states = static_cast<double>(b.states_visited);
    r.iterations = T;
  });
  record(algo::restart, [&](RunRecord& r) {
    const auto b =
        baseline_restart_hillclimb(inst, samples, cfg.saa, cfg.baseline_trials, seeds.algorithms,
                                   cfg.stage.neighborhood);
    r.total_cost = b.best_state.eval.total;
    r.states = static_cast<double>(b.states_visited);
    r.iterations = T;
  });
  record(algo::nearest, [&](RunRecord& r) {
    const auto b = baseline_nearest(inst, samples, cfg.saa);
    r.total_cost = b.best_state.eval.total;
    // Non-searching baselines are charged T states.
    r.states = T;
    r.iterations = 1;
  });
  record(algo::stage, [&](RunRecord& r) {
    const auto s = stage_search(inst, samples, cfg.saa, cfg.stage, seeds.algorithms);
    r.total_cost = s.best_state.eval.total;
    r.states = static_cast<double>(s.total_states_visited);
    r.iterations = s.iterations;
    r.converged = s.converged;
    out.log.rho = s.per_iteration_optima;
  });
  return out;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto cell_list = cells(cfg);
  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  const std::size_t n = cell_list.size() * reps;
  std::vector<RunOutput> outputs(n);

  // Each task owns its slot; assembly below is sequential and ordered.
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    outputs[ui] = run_one(cfg, cell_list[ui / reps], static_cast<int>(ui % reps));
  }

  ExperimentResult res;
  std::map<std::pair<Cell, std::string>, std::vector<const RunRecord*>> groups;
  for (auto& o : outputs) {
    for (auto& r : o.records) res.runs.push_back(r);
    if (!o.log.rho.empty()) res.convergence.push_back(std::move(o.log));
  }
  std::stable_sort(res.runs.begin(), res.runs.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.cell, a.replication, a.algorithm) < std::tie(b.cell, b.replication, b.algorithm);
  });
  for (const auto& r : res.runs) groups[{r.cell, r.algorithm}].push_back(&r);

  for (const auto& [key, group] : groups) {
    std::vector<double> cost, states, iters;
    int infeasible = 0;
    for (const RunRecord* r : group) {
      if (!r->feasible) {
        ++infeasible;
        continue;
      }
      cost.push_back(r->cost_per_server);
      states.push_back(r->states);
      iters.push_back(r->iterations);
    }
    MetricsRow row;
    row.cell = key.first;
    row.algorithm = key.second;
    row.mean_cost_per_server = mean_of(cost);
    row.sd_cost_per_server = sd_of(cost);
    row.mean_states = mean_of(states);
    row.sd_states = sd_of(states);
    row.mean_iterations = mean_of(iters);
    row.replications = static_cast<int>(cost.size());
    row.infeasible_count = infeasible;
    row.seed = cfg.master_seed;
    res.rows.push_back(std::move(row));
  }
  return res;
}

std::string sweep_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << "servers,devices,comp_lo,comp_hi,algorithm,mean_cost_per_server,sd_cost_per_server,"
        "mean_states,sd_states,mean_iters,replications,infeasible_count,seed\n";
  for (const auto& r : rows)
    os << r.cell.servers << ',' << r.cell.devices << ',' << r.cell.components_lo << ','
       << r.cell.components_hi << ',' << r.algorithm << ',' << fixed(r.mean_cost_per_server) << ','
       << fixed(r.sd_cost_per_server) << ',' << fixed(r.mean_states) << ',' << fixed(r.sd_states)
       << ',' << fixed(r.mean_iterations) << ',' << r.replications << ',' << r.infeasible_count
       << ',' << r.seed << '\n';
  return os.str();
}

std::string convergence_csv(const std::vector<ConvergenceLog>& logs) {
  std::ostringstream os;
  os << "run_id,t,rho_t\n";
  for (const auto& log : logs)
    for (std::size_t t = 0; t < log.rho.size(); ++t)
      os << log.run_id << ',' << t + 1 << ',' << fixed(log.rho[t]) << '\n';
  return os.str();
}

std::string runs_csv(const std::vector<RunRecord>& runs) {
  std::ostringstream os;
  os << "servers,devices,comp_lo,comp_hi,replication,algorithm,feasible,total_cost,"
        "cost_per_server,states,iterations,converged\n";
  for (const auto& r : runs)
    os << r.cell.servers << ',' << r.cell.devices << ',' << r.cell.components_lo << ','
       << r.cell.components_hi << ',' << r.replication << ',' << r.algorithm << ','
       << (r.feasible ? 1 : 0) << ',' << fixed(r.total_cost) << ',' << fixed(r.cost_per_server)
       << ',' << fixed(r.states, 0) << ',' << fixed(r.iterations, 0) << ','
       << (r.converged ? 1 : 0) << '\n';
  return os.str();
}

void write_outputs(const std::vector<MetricsRow>& rows,
                   const std::vector<ConvergenceLog>& convergence,
                   const std::filesystem::path& out_dir, const std::vector<RunRecord>& runs) {
  if (rows.empty()) throw ContractViolation("write_outputs needs at least one metrics row");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
  };
  write(out_dir / "sweep.csv", sweep_csv(rows));
  write(out_dir / "convergence.csv", convergence_csv(convergence));
  if (!runs.empty()) write(out_dir / "runs.csv", runs_csv(runs));
}

double validate_p1_feasibility(const Instance& inst, const Placement& pl, double alpha,
                               int validation_theta, std::uint64_t seed) {
  const SaaParams fresh{alpha, alpha, validation_theta};
  const SampleSet samples = draw_samples(inst, fresh, stream_seed(seed, "validation"));
  return overload_profile(inst, samples, pl, fresh).max_proportion();
}

}  // namespace dtplace
