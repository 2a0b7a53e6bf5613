#include "dtplace/stage.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dtplace/error.hpp"
#include "dtplace/format.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

namespace {

std::array<double, 6> basis(double u, double v) { return {1.0, u, v, u * u, v * v, u * v}; }

}  // namespace

std::array<double, 6> QuadraticModel::raw_coefficients() const {
  const auto& b = coefficients;
  // u = a1 f1 + c1, v = a2 f2 + c2
  const double a1 = 1.0 / deviation[0], c1 = -mean[0] / deviation[0];
  const double a2 = 1.0 / deviation[1], c2 = -mean[1] / deviation[1];
  return {
      b[0] + b[1] * c1 + b[2] * c2 + b[3] * c1 * c1 + b[4] * c2 * c2 + b[5] * c1 * c2,
      b[1] * a1 + 2.0 * b[3] * a1 * c1 + b[5] * a1 * c2,
      b[2] * a2 + 2.0 * b[4] * a2 * c2 + b[5] * c1 * a2,
      b[3] * a1 * a1,
      b[4] * a2 * a2,
      b[5] * a1 * a2,
  };
}

double predict(const QuadraticModel& model, const FeatureVector& f) {
  if (model.degenerate) return model.coefficients[0];
  const double u = (f.dist_off - model.mean[0]) / model.deviation[0];
  const double v = (f.dist_com - model.mean[1]) / model.deviation[1];
  const auto x = basis(u, v);
  double out = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) out += model.coefficients[i] * x[i];
  return out;
}

QuadraticModel fit_value_model(const std::vector<Trajectory>& trajectories, double ridge) {
  std::vector<std::array<double, 2>> xs;
  std::vector<double> ys;
  for (const auto& traj : trajectories)
    for (const auto& p : traj.points) {
      xs.push_back({p.dist_off, p.dist_com});
      ys.push_back(traj.endpoint_value);
    }
  if (xs.empty()) throw ContractViolation("fit_value_model needs at least one data point");

  const auto n = static_cast<double>(xs.size());
  QuadraticModel model;
  model.ridge = ridge;
  double target_mean = 0.0;
  for (double y : ys) target_mean += y;
  target_mean /= n;

  auto constant = [&model, target_mean]() {
    model.degenerate = true;
    model.coefficients = {target_mean, 0, 0, 0, 0, 0};
    return model;
  };
  const bool flat_targets =
      std::all_of(ys.begin(), ys.end(), [&ys](double y) { return y == ys.front(); });
  if (xs.size() < 2 || flat_targets) return constant();

  for (int j = 0; j < 2; ++j) {
    double m = 0.0;
    for (const auto& x : xs) m += x[j];
    m /= n;
    double var = 0.0;
    for (const auto& x : xs) var += (x[j] - m) * (x[j] - m);
    const double sd = std::sqrt(var / n);
    model.mean[j] = m;
    model.deviation[j] = sd > 0.0 ? sd : 1.0;
  }

  Eigen::Matrix<double, 6, 6> normal = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> rhs = Eigen::Matrix<double, 6, 1>::Zero();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto row = basis((xs[i][0] - model.mean[0]) / model.deviation[0],
                           (xs[i][1] - model.mean[1]) / model.deviation[1]);
    Eigen::Map<const Eigen::Matrix<double, 6, 1>> x(row.data());
    normal.noalias() += x * x.transpose();
    rhs.noalias() += x * ys[i];
  }
  // Intercept is not penalized.
  for (int j = 1; j < 6; ++j) normal(j, j) += ridge;

  Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return constant();
  const Eigen::Matrix<double, 6, 1> beta = ldlt.solve(rhs);
  if (!beta.allFinite()) return constant();
  // Guard against a numerically singular system that LDLT accepted.
  if ((normal * beta - rhs).norm() > 1e-6 * std::max(1.0, rhs.norm())) return constant();
  for (int j = 0; j < 6; ++j) model.coefficients[static_cast<std::size_t>(j)] = beta(j);
  return model;
}

void StageConfig::validate() const {
  if (!(delta > 0.0)) throw ConfigError("convergence bound delta must be > 0");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (phase2_step_cap < 1) throw ConfigError("phase2_step_cap must be >= 1");
  if (!(ridge >= 0.0)) throw ConfigError("ridge must be >= 0");
}

bool converged(double rho_t, double rho_prev, double delta) {
  if (std::isinf(rho_prev) || std::isinf(rho_t)) return false;
  const double denom = std::abs(rho_t) + std::abs(rho_prev);
  // Two zero-cost optima are identical.
  if (denom == 0.0) return true;
  return std::abs(rho_t - rho_prev) / denom < delta;
}

StageResult stage_search(const Instance& inst, const SampleSet& samples, const SaaParams& params,
                         const StageConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  params.validate();
  StageResult res;
  SearchState start = random_feasible_state(inst, samples, params, stream_seed(seed, "stage-start"));
  res.best_state = start;
  auto consider = [&res](const SearchState& st) {
    if (st.eval.total < res.best_state.eval.total) res.best_state = st;
  };

  std::vector<Trajectory> pooled;
  double rho_prev = std::numeric_limits<double>::infinity();
  bool restarted = false;
  const Objective rho = total_cost_objective();
  ClimbOptions phase1;
  phase1.neighborhood = cfg.neighborhood;
  ClimbOptions phase2 = phase1;
  phase2.max_steps = cfg.phase2_step_cap;

  for (int t = 1; t <= cfg.max_iterations; ++t) {
    // Phase I: descend on the true objective and collect the trajectory.
    ClimbResult climb = hill_climb(inst, samples, params, start, rho, phase1);
    const double rho_t = climb.endpoint.eval.total;
    res.iterations = t;
    res.total_states_visited += climb.trajectory.length();
    res.per_iteration_optima.push_back(rho_t);
    consider(climb.endpoint);
    const bool done = converged(rho_t, rho_prev, cfg.delta);
    res.log.push_back({t, climb.trajectory.length(), rho_t, done, restarted});
    res.final_state = climb.endpoint;
    pooled.push_back(std::move(climb.trajectory));
    if (done) {
      res.converged = true;
      break;
    }
    if (t == cfg.max_iterations) break;

    // Phase II: learn V on every trajectory so far and descend on it.
    const QuadraticModel model = fit_value_model(pooled, cfg.ridge);
    const Objective on_model = [&model](const CostBreakdown&, const FeatureVector& f) {
      return predict(model, f);
    };
    ClimbResult guided =
        hill_climb(inst, samples, params, climb.endpoint, on_model, phase2);
    for (const auto& pl : guided.trajectory.placements) {
      const double cost = evaluate(inst, pl).total;
      if (cost < res.best_state.eval.total) res.best_state = make_state(inst, samples, pl);
    }

    restarted = cfg.restart_on_stall && guided.endpoint.placement == climb.endpoint.placement;
    start = restarted ? random_feasible_state(inst, samples, params,
                                              stream_seed(seed, "stage-restart",
                                                          static_cast<std::uint64_t>(t)))
                      : std::move(guided.endpoint);
    rho_prev = rho_t;
  }
  return res;
}

std::string iteration_log_csv(const StageResult& result) {
  std::ostringstream os;
  os << "t,q_t,rho_t,converged\n";
  for (const auto& it : result.log)
    os << it.t << ',' << it.q << ',' << fixed(it.rho) << ',' << (it.converged ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace dtplace
