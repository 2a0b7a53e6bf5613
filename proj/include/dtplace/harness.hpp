#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dtplace/baselines.hpp"
#include "dtplace/saa.hpp"
#include "dtplace/stage.hpp"

namespace dtplace {

enum class SweepAxis { servers, devices };

/// One of the two scenario families: a server sweep (S in 2..10, D in {5,10},
/// C in [1,3]) or a device sweep (D in 5..10, S = 6, C in [1,3] or [1,5]).
struct ExperimentConfig {
  SweepAxis axis = SweepAxis::devices;
  std::vector<int> values{5, 6, 7, 8, 9, 10};
  int fixed_servers = 6;  // device sweep
  int fixed_devices = 5;  // server sweep
  int components_lo = 1;
  int components_hi = 3;
  int replications = 1;
  std::uint64_t master_seed = 1;
  SaaParams saa{0.01, 0.005, 200};
  StageConfig stage;
  int baseline_trials = 10;

  void validate() const;  // throws ConfigError
};

namespace algo {
inline constexpr const char* random_best = "baseline1_random";
inline constexpr const char* restart = "baseline2_restart";
inline constexpr const char* nearest = "baseline3_nearest";
inline constexpr const char* stage = "stage";
}  // namespace algo

struct Cell {
  int servers = 0;
  int devices = 0;
  int components_lo = 1;
  int components_hi = 3;

  std::string key() const;
  auto operator<=>(const Cell&) const = default;
};

std::vector<Cell> cells(const ExperimentConfig& cfg);

/// Outcome of one algorithm on one (cell, replication).
struct RunRecord {
  Cell cell;
  int replication = 0;
  std::string algorithm;
  bool feasible = false;
  double total_cost = 0.0;
  double cost_per_server = 0.0;
  double states = 0.0;  // searched-states accounting
  double iterations = 0.0;
  bool converged = false;  // stage only
};

struct MetricsRow {
  Cell cell;
  std::string algorithm;
  double mean_cost_per_server = 0.0;
  double sd_cost_per_server = 0.0;
  double mean_states = 0.0;
  double sd_states = 0.0;
  double mean_iterations = 0.0;
  int replications = 0;  // feasible runs aggregated
  int infeasible_count = 0;
  std::uint64_t seed = 0;
};

struct ConvergenceLog {
  std::string run_id;
  std::vector<double> rho;
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<RunRecord> runs;  // sorted by cell, replication, algorithm
  std::vector<ConvergenceLog> convergence;
};

/// Sub-seeds of one replication, split from the master seed by label.
struct RunSeeds {
  std::uint64_t instance = 0;
  std::uint64_t samples = 0;
  std::uint64_t algorithms = 0;
};
RunSeeds run_seeds(std::uint64_t master_seed, const Cell& cell, int replication);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes sweep.csv and convergence.csv into `out_dir` (created if needed),
/// plus runs.csv when per-run records are given.
void write_outputs(const std::vector<MetricsRow>& rows,
                   const std::vector<ConvergenceLog>& convergence,
                   const std::filesystem::path& out_dir,
                   const std::vector<RunRecord>& runs = {});

std::string sweep_csv(const std::vector<MetricsRow>& rows);
std::string convergence_csv(const std::vector<ConvergenceLog>& logs);
std::string runs_csv(const std::vector<RunRecord>& runs);

/// Largest per-server overload proportion of `pl` on a fresh sample set of
/// `validation_theta` scenarios; compare against alpha.
double validate_p1_feasibility(const Instance& inst, const Placement& pl, double alpha,
                               int validation_theta, std::uint64_t seed);

}  // namespace dtplace
