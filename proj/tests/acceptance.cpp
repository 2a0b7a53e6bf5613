// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dtplace/error.hpp"
#include "dtplace/harness.hpp"
#include "dtplace/oracle.hpp"
#include "support.hpp"

using namespace dtplace;
using namespace testing;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail, double seconds) {
  std::printf("%s [%d] %s: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, name, detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Average ranks, ties share the mean of their positions.
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

const std::vector<std::string> kAlgorithms{algo::random_best, algo::restart, algo::nearest,
                                           algo::stage};

// ---------------------------------------------------------------------------

void criterion_1() {
  Timer t;
  const double p = approx_success_prob({0.01, 0.005, 1850});
  report(1, "success probability at the reference SAA parameters", std::abs(p - 0.990) <= 0.001,
         fmt("value %.6f, want 0.990 +- 0.001", p), t.seconds());
}

void criterion_2() {
  Timer t;
  int n = 0, within = 0, below = 0;
  double worst_gap = 0.0;
  for (int i = 0; n < 20; ++i) {
    Rng rng = make_stream(2, "acceptance-tiny", static_cast<std::uint64_t>(i));
    GenConfig g;
    g.num_servers = std::uniform_int_distribution<int>(2, 3)(rng);
    g.num_devices = 2;
    g.components_lo = 1;
    g.components_hi = 2;  // sum of components <= 4
    const Instance inst = generate_instance(g, rng());
    const SaaParams params{0.01, 0.005, 50};
    const SampleSet samples = draw_samples(inst, params, rng());
    const auto opt = exact_solve(inst, samples, params);
    if (!opt.feasible()) continue;  // nothing to compare against
    ++n;
    const auto r = stage_search(inst, samples, params, StageConfig{}, rng());
    const double v = r.best_state.eval.total;
    const double gap = *opt.optimum > 0 ? (v - *opt.optimum) / *opt.optimum : 0.0;
    worst_gap = std::max(worst_gap, gap);
    if (v <= *opt.optimum * 1.05 + 1e-9) ++within;
    if (v < *opt.optimum - 1e-9 * std::max(1.0, *opt.optimum)) ++below;
  }
  const bool pass = within >= 18 && below == 0;
  report(2, "stage search against the exact optimum on tiny instances", pass,
         std::to_string(within) + "/" + std::to_string(n) + " within 5%, " +
             std::to_string(below) + " below optimum, worst gap " + fmt("%.4f", worst_gap),
         t.seconds());
}

// Criteria 3, 5 and 6 share the device sweep at S=6, C in [1,3], theta=200.
void criteria_3_5_6() {
  Timer t;
  ExperimentConfig cfg;
  cfg.axis = SweepAxis::devices;
  cfg.values = {5, 6, 7, 8, 9, 10};
  cfg.replications = 30;
  cfg.master_seed = 3;
  cfg.saa = {0.01, 0.005, 200};
  cfg.baseline_trials = 10;
  const ExperimentResult res = run_experiment(cfg);
  const double elapsed = t.seconds();

  // (cell, replication) -> algorithm -> record
  std::map<std::pair<Cell, int>, std::map<std::string, const RunRecord*>> matched;
  for (const auto& r : res.runs) matched[{r.cell, r.replication}][r.algorithm] = &r;

  struct Means {
    std::map<std::string, double> sum;
    int n = 0;
  };
  std::map<Cell, Means> paired;
  int dropped = 0;
  int states_pairs = 0, states_ok = 0;
  int stage_runs = 0, stage_converged = 0;
  for (const auto& [key, recs] : matched) {
    const RunRecord* st = recs.at(algo::stage);
    const RunRecord* b2 = recs.at(algo::restart);
    if (st->feasible) {
      ++stage_runs;
      stage_converged += st->converged;
    }
    if (st->feasible && b2->feasible) {
      ++states_pairs;
      states_ok += st->states <= b2->states;
    }
    const bool all = std::all_of(kAlgorithms.begin(), kAlgorithms.end(),
                                 [&](const std::string& a) { return recs.at(a)->feasible; });
    if (!all) {
      ++dropped;
      continue;
    }
    Means& m = paired[key.first];
    for (const auto& a : kAlgorithms) m.sum[a] += recs.at(a)->cost_per_server;
    ++m.n;
  }

  // Paired mean margins per cell; every cell must respect every ordering.
  struct Order {
    const char* lo;
    const char* hi;
    const char* label;
  };
  const Order orders[] = {{algo::stage, algo::restart, "stage<=b2"},
                          {algo::restart, algo::random_best, "b2<=b1"},
                          {algo::stage, algo::nearest, "stage<=b3"}};
  bool ordering_holds = !paired.empty();
  std::string detail;
  for (const auto& o : orders) {
    double worst = std::numeric_limits<double>::infinity();
    int bad = 0;
    for (const auto& [cell, m] : paired) {
      const double margin = (m.sum.at(o.hi) - m.sum.at(o.lo)) / m.n;
      worst = std::min(worst, margin);
      if (margin < 0) ++bad;
    }
    if (bad) ordering_holds = false;
    detail += std::string(o.label) + " min margin " + fmt("%.3f", worst) + " (" +
              std::to_string(bad) + "/" + std::to_string(paired.size()) + " cells negative); ";
  }
  detail += std::to_string(dropped) + " replications dropped for infeasibility";
  report(3, "cost ordering over the device sweep", ordering_holds, detail, elapsed);

  const double frac = states_pairs ? static_cast<double>(states_ok) / states_pairs : 0.0;
  report(5, "stage visits no more states than restarts", frac >= 0.7 && ordering_holds,
         fmt("%.3f", frac) + " of " + std::to_string(states_pairs) +
             " matched runs (need 0.70), cost ordering " + (ordering_holds ? "holds" : "fails"),
         0.0);

  const double conv = stage_runs ? static_cast<double>(stage_converged) / stage_runs : 0.0;
  report(6, "stage search converges before the iteration cap", conv >= 0.9,
         fmt("%.3f", conv) + " of " + std::to_string(stage_runs) + " runs (need 0.90)", 0.0);
}

void criterion_4() {
  Timer t;
  struct Sweep {
    SweepAxis axis;
    std::vector<int> values;
    int fixed_devices;
    double sign;
    const char* name;
  };
  const Sweep sweeps[] = {
      {SweepAxis::devices, {5, 6, 7, 8, 9, 10}, 5, +1.0, "D sweep at S=6"},
      {SweepAxis::servers, {2, 3, 4, 5, 6, 7, 8, 9, 10}, 5, -1.0, "S sweep at D=5"},
      {SweepAxis::servers, {2, 3, 4, 5, 6, 7, 8, 9, 10}, 10, -1.0, "S sweep at D=10"},
  };
  bool pass = true;
  std::string detail;
  for (const auto& sw : sweeps) {
    ExperimentConfig cfg;
    cfg.axis = sw.axis;
    cfg.values = sw.values;
    cfg.fixed_devices = sw.fixed_devices;
    cfg.replications = 100;
    cfg.master_seed = 4;
    cfg.saa = {0.01, 0.005, 200};
    const ExperimentResult res = run_experiment(cfg);
    double weakest = 1.0;
    for (const auto& a : kAlgorithms) {
      std::vector<double> axis, mean;
      for (const auto& row : res.rows)
        if (row.algorithm == a && row.replications > 0) {
          axis.push_back(sw.axis == SweepAxis::devices ? row.cell.devices : row.cell.servers);
          mean.push_back(row.mean_cost_per_server);
        }
      const double rho = axis.size() == sw.values.size() ? sw.sign * spearman(axis, mean) : -1.0;
      weakest = std::min(weakest, rho);
      if (rho < 0.9) {
        pass = false;
        detail += std::string("[") + sw.name + " " + a + " signed rho " + fmt("%.3f", rho) + "] ";
      }
    }
    detail += std::string(sw.name) + " weakest signed rho " + fmt("%.3f", weakest) + "; ";
  }
  report(4, "cost trends along both sweep axes", pass, detail + "100 replications per cell",
         t.seconds());
}

void criterion_7() {
  Timer t;
  int ok = 0;
  double worst = 0.0;
  const SaaParams params{0.01, 0.005, 1850};
  for (int i = 0; i < 40; ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    GenConfig g;
    g.num_servers = 6;
    g.num_devices = 5 + i % 6;
    const Instance inst = generate_instance(g, stream_seed(7, "acceptance-validity-instance", u));
    const SampleSet samples = draw_samples(inst, params, stream_seed(7, "acceptance-validity-samples", u));
    const auto r = stage_search(inst, samples, params, StageConfig{},
                                stream_seed(7, "acceptance-validity-search", u));
    const double v = validate_p1_feasibility(inst, r.best_state.placement, params.alpha, 20000,
                                             stream_seed(7, "acceptance-validity-check", u));
    worst = std::max(worst, v);
    ok += v <= params.alpha;
  }
  report(7, "sampled solutions hold on fresh scenarios", ok >= 38,
         std::to_string(ok) + "/40 within alpha, worst overload proportion " + fmt("%.4f", worst),
         t.seconds());
}

// ---------------------------------------------------------------------------
// Criterion 8: the invariant suites, run on their stated domains.

bool suite_hill_climb(std::string& why) {
  Rng rng(81);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    GenConfig cfg;
    cfg.num_servers = std::uniform_int_distribution<int>(2, 6)(rng);
    cfg.num_devices = std::uniform_int_distribution<int>(1, 6)(rng);
    cfg.capacity = {3e7, 1e8};
    const Instance inst = generate_instance(cfg, rng());
    const SaaParams params{0.05, 0.05, 40};
    const SampleSet samples = draw_samples(inst, params, rng());
    SearchState start;
    try {
      start = random_feasible_state(inst, samples, params, rng());
    } catch (const NoFeasibleState&) {
      continue;
    }
    ClimbOptions opts;
    opts.neighborhood = i % 2 ? Neighborhood::component : Neighborhood::component_and_device;
    const auto res = hill_climb(inst, samples, params, start, total_cost_objective(), opts);
    const auto& pls = res.trajectory.placements;
    for (std::size_t q = 1; q < pls.size(); ++q)
      if (!(evaluate(inst, pls[q]).total < evaluate(inst, pls[q - 1]).total)) {
        why = "non-strict step";
        return false;
      }
    for (const auto& pl : pls)
      if (!brute_feasible(inst, samples, pl, params.epsilon)) {
        why = "infeasible trajectory state";
        return false;
      }
    for (const auto& pl : pls)
      if (hill_climb(inst, samples, params, make_state(inst, samples, pl), total_cost_objective(), opts)
              .endpoint.placement != res.endpoint.placement) {
        why = "restart from trajectory state diverged";
        return false;
      }
    ++checked;
  }
  why = std::to_string(checked) + " climbs";
  return checked > 100;
}

bool suite_explicit_cost(std::string& why) {
  Rng rng(82);
  std::size_t placements = 0;
  for (int i = 0; i < 80; ++i) {
    const Instance inst = generate_instance(small_config(rng, 3, 3, 3), rng());
    if (placement_count(inst) > 4096) continue;
    bool ok = true;
    for_each_placement(inst, [&](const Placement& pl) {
      const auto fast = evaluate(inst, pl);
      const auto slow = explicit_y_cost(inst, pl);
      const auto f = features(inst, pl);
      ok = ok && close(fast.offload, slow.offload) && close(fast.communication, slow.communication) &&
           close(f.dist_off, slow.dist_off) && close(f.dist_com, slow.dist_com);
      ++placements;
    });
    if (!ok) {
      why = "mismatch on instance " + std::to_string(i);
      return false;
    }
  }
  why = std::to_string(placements) + " placements";
  return placements > 1000;
}

bool suite_overloads(std::string& why) {
  Rng rng(83);
  for (int i = 0; i < 300; ++i) {
    GenConfig cfg = small_config(rng, 4, 4, 3);
    cfg.capacity = {1e7, 6e7};
    const Instance inst = generate_instance(cfg, rng());
    const SaaParams params{0.1, 0.05, 60};
    const SampleSet samples = draw_samples(inst, params, rng());
    const Placement pl = random_placement(inst, rng);
    const auto prof = overload_profile(inst, samples, pl, params);
    if (prof.overload_count != brute_overloads(inst, samples, pl) ||
        is_feasible(prof, params) != brute_feasible(inst, samples, pl, params.epsilon)) {
      why = "mismatch on instance " + std::to_string(i);
      return false;
    }
  }
  why = "300 placements";
  return true;
}

bool suite_regression(std::string& why) {
  Rng rng(84);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Trajectory> data;
  for (int i = 0; i < 40; ++i) {
    Trajectory t;
    const double f1 = u(rng), f2 = u(rng);
    t.points = {{f1, f2}};
    t.endpoint_value = 2.0 + 3.0 * f1 - f2 + 0.5 * f1 * f1;
    data.push_back(t);
  }
  const auto raw = fit_value_model(data).raw_coefficients();
  const std::array<double, 6> want{2.0, 3.0, -1.0, 0.5, 0.0, 0.0};
  double err = 0.0;
  for (std::size_t j = 0; j < 6; ++j) err = std::max(err, std::abs(raw[j] - want[j]));
  why = fmt("max coefficient error %.2e", err);
  return err < 1e-6;
}

bool suite_reproducible(std::string& why) {
  ExperimentConfig cfg;
  cfg.values = {5, 7};
  cfg.replications = 3;
  cfg.master_seed = 85;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  const bool same = sweep_csv(a.rows) == sweep_csv(b.rows) &&
                    convergence_csv(a.convergence) == convergence_csv(b.convergence) &&
                    runs_csv(a.runs) == runs_csv(b.runs);
  why = same ? "sweep, convergence and run CSVs identical" : "outputs differ";
  return same;
}

void criterion_8() {
  Timer t;
  struct Suite {
    const char* name;
    bool (*run)(std::string&);
  };
  const Suite suites[] = {{"hill climb", suite_hill_climb},
                          {"explicit cost", suite_explicit_cost},
                          {"overload count", suite_overloads},
                          {"planted quadratic", suite_regression},
                          {"reproducibility", suite_reproducible}};
  bool pass = true;
  std::string detail;
  for (const auto& s : suites) {
    std::string why;
    const bool ok = s.run(why);
    pass &= ok;
    detail += std::string(s.name) + (ok ? " ok (" : " FAILED (") + why + "); ";
  }
  report(8, "mechanical invariant suites", pass, detail, t.seconds());
}

}  // namespace

int main() {
  configure_threads_from_env();
  criterion_1();
  criterion_2();
  criteria_3_5_6();
  criterion_4();
  criterion_7();
  criterion_8();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
