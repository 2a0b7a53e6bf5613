// dtplace: command-line front end for the placement library.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 no feasible placement.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dtplace/baselines.hpp"
#include "dtplace/error.hpp"
#include "dtplace/harness.hpp"
#include "dtplace/io.hpp"
#include "dtplace/kernels.hpp"
#include "dtplace/oracle.hpp"
#include "dtplace/stage.hpp"

using namespace dtplace;
using nlohmann::json;

namespace {

struct SaaOptions {
  double alpha = 0.01;
  double epsilon = 0.005;
  int theta = 1850;

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "risk level of the chance constraint")->capture_default_str();
    app->add_option("--epsilon", epsilon, "risk level of the sampled constraint")->capture_default_str();
    app->add_option("--theta", theta, "number of Monte Carlo scenarios")->capture_default_str();
  }
  SaaParams params() const {
    SaaParams p{alpha, epsilon, theta};
    p.validate();
    return p;
  }
};

struct ProblemInput {
  std::string instance_file;
  std::string samples_file;
  std::uint64_t seed = 1;

  void add(CLI::App* app) {
    app->add_option("--instance", instance_file, "instance JSON")->required()->check(CLI::ExistingFile);
    app->add_option("--samples", samples_file, "sample set JSON (drawn from --seed if omitted)")
        ->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "seed for sampling and search")->capture_default_str();
  }
};

struct Loaded {
  Instance inst;
  SampleSet samples;
  SaaParams params;
};

Loaded load(const ProblemInput& in, const SaaOptions& saa) {
  Loaded out;
  out.inst = io::instance_from_json(io::read_json_file(in.instance_file));
  out.params = saa.params();
  if (in.samples_file.empty()) {
    out.samples = draw_samples(out.inst, out.params, in.seed);
  } else {
    out.samples = io::samples_from_json(io::read_json_file(in.samples_file));
    if (out.samples.num_components() != out.inst.num_components())
      throw ConfigError("sample set does not match the instance's components");
    out.params.theta = out.samples.theta();
  }
  return out;
}

json result_record(const std::string& algorithm, const Loaded& p, const SearchState& st,
                   std::size_t states, int iterations) {
  json j = {{"algorithm", algorithm},
            {"feasible", st.feasible(p.params)},
            {"total_cost", st.eval.total},
            {"offload_cost", st.eval.offload},
            {"communication_cost", st.eval.communication},
            {"cost_per_server", st.eval.total / static_cast<double>(p.inst.num_servers())},
            {"states_visited", states},
            {"iterations", iterations},
            {"max_overload_proportion", st.profile.max_proportion()}};
  j["placement"] = io::to_json(p.inst, st.placement)["placement"];
  return j;
}

void emit(const json& record, const std::string& out_file) {
  std::cout << record.dump(2) << '\n';
  if (!out_file.empty()) io::write_json_file(out_file, record);
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ConfigError("components must look like LO..HI, got '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  CLI::App app{"Chance-constrained digital-twin component placement on edge servers"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  GenConfig gen_cfg;
  std::string components = "1..3";
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--servers", gen_cfg.num_servers)->capture_default_str();
  gen->add_option("--devices", gen_cfg.num_devices)->capture_default_str();
  gen->add_option("--components", components, "components per device, LO..HI")->capture_default_str();
  gen->add_option("--area", gen_cfg.area_side, "side of the square area in meters")->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--out", gen_out)->required();

  // samples
  auto* smp = app.add_subcommand("samples", "draw and persist a sample set");
  std::string smp_instance, smp_out;
  std::uint64_t smp_seed = 1;
  SaaOptions smp_saa;
  smp->add_option("--instance", smp_instance)->required()->check(CLI::ExistingFile);
  smp->add_option("--seed", smp_seed)->capture_default_str();
  smp->add_option("--out", smp_out)->required();
  smp_saa.add(smp);

  // solve
  auto* solve = app.add_subcommand("solve", "run the learned-restart local search");
  ProblemInput solve_in;
  SaaOptions solve_saa;
  StageConfig stage_cfg;
  std::string solve_out, solve_log;
  bool report_final = false;
  solve_in.add(solve);
  solve_saa.add(solve);
  solve->add_option("--delta", stage_cfg.delta, "convergence bound")->capture_default_str();
  solve->add_option("--max-iterations", stage_cfg.max_iterations)->capture_default_str();
  solve->add_option("--phase2-step-cap", stage_cfg.phase2_step_cap)->capture_default_str();
  solve->add_flag("--report-final", report_final,
                  "report the last phase-one optimum instead of the best state visited");
  solve->add_option("--out", solve_out, "write the result record here");
  solve->add_option("--log", solve_log, "write the per-iteration CSV log here");

  // baseline
  auto* base = app.add_subcommand("baseline", "run one comparison strategy");
  ProblemInput base_in;
  SaaOptions base_saa;
  std::string which;
  int trials = 10;
  std::string base_out;
  base_in.add(base);
  base_saa.add(base);
  base->add_option("--which", which)->required()->check(CLI::IsMember({"random", "restart", "nearest"}));
  base->add_option("--trials", trials)->capture_default_str();
  base->add_option("--out", base_out);

  // oracle
  auto* orc = app.add_subcommand("oracle", "exhaustively solve a tiny instance");
  ProblemInput orc_in;
  SaaOptions orc_saa;
  std::uint64_t size_cap = 2'000'000;
  orc_in.add(orc);
  orc_saa.add(orc);
  orc->add_option("--size-cap", size_cap)->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a scenario sweep");
  std::string exp_config, exp_out;
  std::optional<std::uint64_t> exp_seed;
  std::optional<int> exp_reps;
  exp->add_option("--config", exp_config)->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out)->required();
  exp->add_option("--seed", exp_seed, "override master_seed");
  exp->add_option("--replications", exp_reps, "override replications");

  // validate
  auto* val = app.add_subcommand("validate", "check a placement against fresh samples");
  std::string val_instance, val_placement;
  double val_alpha = 0.01;
  int val_theta = 20000;
  std::uint64_t val_seed = 1;
  val->add_option("--instance", val_instance)->required()->check(CLI::ExistingFile);
  val->add_option("--placement", val_placement)->required()->check(CLI::ExistingFile);
  val->add_option("--alpha", val_alpha)->capture_default_str();
  val->add_option("--validation-theta", val_theta)->capture_default_str();
  val->add_option("--seed", val_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) {
      std::tie(gen_cfg.components_lo, gen_cfg.components_hi) = parse_range(components);
      const Instance inst = generate_instance(gen_cfg, gen_seed);
      io::write_json_file(gen_out, io::to_json(inst));
      std::cout << "wrote " << gen_out << ": " << inst.num_servers() << " servers, "
                << inst.num_devices() << " devices, " << inst.num_components() << " components\n";
    } else if (*smp) {
      const Instance inst = io::instance_from_json(io::read_json_file(smp_instance));
      const SampleSet samples = draw_samples(inst, smp_saa.params(), smp_seed);
      io::write_json_file(smp_out, io::to_json(samples));
      std::cout << "wrote " << smp_out << ": " << samples.theta() << " scenarios\n";
    } else if (*solve) {
      const Loaded p = load(solve_in, solve_saa);
      const StageResult r = stage_search(p.inst, p.samples, p.params, stage_cfg, solve_in.seed);
      json rec = result_record(algo::stage, p, report_final ? r.final_state : r.best_state,
                               r.total_states_visited, r.iterations);
      rec["converged"] = r.converged;
      rec["per_iteration_optima"] = r.per_iteration_optima;
      emit(rec, solve_out);
      if (!solve_log.empty()) {
        std::ofstream f(solve_log);
        if (!f) throw std::runtime_error("cannot open " + solve_log);
        f << iteration_log_csv(r);
      }
    } else if (*base) {
      const Loaded p = load(base_in, base_saa);
      BaselineResult r;
      std::string id;
      if (which == "random") {
        r = baseline_random_best(p.inst, p.samples, p.params, trials, base_in.seed);
        id = algo::random_best;
      } else if (which == "restart") {
        r = baseline_restart_hillclimb(p.inst, p.samples, p.params, trials, base_in.seed);
        id = algo::restart;
      } else {
        r = baseline_nearest(p.inst, p.samples, p.params);
        id = algo::nearest;
      }
      emit(result_record(id, p, r.best_state, r.states_visited, 1), base_out);
    } else if (*orc) {
      const Loaded p = load(orc_in, orc_saa);
      const OracleResult r = exact_solve(p.inst, p.samples, p.params, size_cap);
      json rec = {{"states_enumerated", r.states_enumerated}, {"feasible", r.feasible()}};
      if (r.feasible()) {
        rec["optimum"] = *r.optimum;
        rec["argmin"] = io::to_json(p.inst, r.argmin)["placement"];
      }
      std::cout << rec.dump(2) << '\n';
      if (!r.feasible()) return 3;
    } else if (*exp) {
      ExperimentConfig cfg = io::experiment_config_from_json(io::read_json_file(exp_config));
      if (exp_seed) cfg.master_seed = *exp_seed;
      if (exp_reps) cfg.replications = *exp_reps;
      const ExperimentResult r = run_experiment(cfg);
      write_outputs(r.rows, r.convergence, exp_out, r.runs);
      std::cout << "wrote " << r.rows.size() << " rows to " << exp_out << "/sweep.csv\n";
    } else if (*val) {
      const Instance inst = io::instance_from_json(io::read_json_file(val_instance));
      const json pj = io::read_json_file(val_placement);
      const Placement pl = io::placement_from_json(inst, pj);
      const double worst = validate_p1_feasibility(inst, pl, val_alpha, val_theta, val_seed);
      std::cout << json{{"max_overload_proportion", worst},
                        {"alpha", val_alpha},
                        {"within_alpha", worst <= val_alpha}}
                       .dump(2)
                << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const NoFeasibleState& e) {
    std::cerr << "no feasible placement: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
