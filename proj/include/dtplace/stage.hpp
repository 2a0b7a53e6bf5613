#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dtplace/local_search.hpp"

namespace dtplace {

/// Binary quadratic value model over (dist_off, dist_com):
///   V = b0 + b1 u + b2 v + b3 u^2 + b4 v^2 + b5 u v
/// where u, v are the standardized features.
struct QuadraticModel {
  std::array<double, 6> coefficients{};
  std::array<double, 2> mean{0.0, 0.0};
  std::array<double, 2> deviation{1.0, 1.0};
  double ridge = 0.0;
  bool degenerate = false;  // constant model, coefficients[0] only

  /// Coefficients of the same polynomial in raw feature units, ordered
  /// (1, f1, f2, f1^2, f2^2, f1 f2).
  std::array<double, 6> raw_coefficients() const;
};

double predict(const QuadraticModel& model, const FeatureVector& f);

/// Least-squares fit of V on the pooled points of every trajectory, each
/// point labelled with its trajectory's endpoint cost. Throws
/// ContractViolation on an empty dataset.
QuadraticModel fit_value_model(const std::vector<Trajectory>& trajectories, double ridge = 1e-8);

struct StageConfig {
  double delta = 0.015;            // relative-change convergence bound
  int max_iterations = 10;
  std::size_t phase2_step_cap = 500;
  double ridge = 1e-8;
  // When descent on the value model cannot move off the phase-one optimum,
  // the next iteration starts from a fresh random feasible state.
  bool restart_on_stall = true;
  Neighborhood neighborhood = Neighborhood::component_and_device;

  void validate() const;  // throws ConfigError
};

/// Relative change test between consecutive phase-one optima. False while
/// the previous value is still the infinite sentinel.
bool converged(double rho_t, double rho_prev, double delta);

struct StageIteration {
  int t = 0;
  std::size_t q = 0;      // phase-one trajectory length
  double rho = 0.0;       // phase-one optimum
  bool converged = false;
  bool restarted = false; // this iteration began from a fresh random state
};

struct StageResult {
  SearchState final_state;
  SearchState best_state;
  int iterations = 0;
  std::vector<double> per_iteration_optima;
  std::vector<StageIteration> log;
  std::size_t total_states_visited = 0;
  bool converged = false;
};

StageResult stage_search(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                         const StageConfig& cfg, std::uint64_t seed);

/// CSV with columns t,q_t,rho_t,converged.
std::string iteration_log_csv(const StageResult& result);

}  // namespace dtplace
