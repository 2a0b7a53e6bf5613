#include "dtplace/saa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dtplace/error.hpp"
#include "dtplace/kernels.hpp"
#include "dtplace/rng.hpp"

namespace dtplace {

void SaaParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (!(epsilon <= alpha)) throw ConfigError("epsilon must not exceed alpha");
  if (!(alpha < 1.0)) throw ConfigError("alpha must be < 1");
  if (theta < 1) throw ConfigError("theta must be >= 1");
}

int SaaParams::overload_threshold(int num_scenarios) const {
  // The relative nudge keeps products such as 0.01 * 100 from landing just
  // below an integer.
  return static_cast<int>(std::floor(epsilon * num_scenarios * (1.0 + 1e-12)));
}

SampleSet::SampleSet(std::size_t components, int theta, std::vector<std::int64_t> cycles,
                     std::uint64_t seed)
    : components_(components), theta_(theta), cycles_(std::move(cycles)), seed_(seed) {
  if (theta_ < 1) throw ContractViolation("sample set needs theta >= 1");
  if (cycles_.size() != components_ * static_cast<std::size_t>(theta_))
    throw ContractViolation("sample set size does not match its dimensions");
}

LoadTable::LoadTable(const Instance& inst, const SampleSet& samples, const Placement& pl)
    : servers_(inst.num_servers()),
      theta_(samples.theta()),
      sums_(inst.num_servers() * static_cast<std::size_t>(samples.theta()), 0) {
  check_placement(inst, pl);
  if (samples.num_components() != inst.num_components())
    throw ContractViolation("sample set does not match the instance");
  for (std::size_t k = 0; k < pl.size(); ++k) {
    std::int64_t* dst = row(static_cast<std::size_t>(pl[k]));
    const std::int64_t* src = samples.row(k);
    for (int t = 0; t < theta_; ++t) dst[t] += src[t];
  }
}

void LoadTable::move(const SampleSet& samples, std::size_t k, std::size_t from, std::size_t to) {
  const std::int64_t* src = samples.row(k);
  std::int64_t* a = row(from);
  std::int64_t* b = row(to);
  for (int t = 0; t < theta_; ++t) {
    a[t] -= src[t];
    b[t] += src[t];
  }
}

double OverloadProfile::max_proportion() const {
  double m = 0.0;
  for (double p : proportion) m = std::max(m, p);
  return m;
}

SampleSet draw_samples(const Instance& inst, const SaaParams& params, std::uint64_t seed,
                       double rel_sd) {
  params.validate();
  Rng rng = make_stream(seed, "samples");
  const std::size_t K = inst.num_components();
  const auto theta = static_cast<std::size_t>(params.theta);
  std::vector<std::int64_t> cycles(K * theta);
  // Scenario-major draw order so that a prefix of scenarios does not depend
  // on theta.
  for (std::size_t t = 0; t < theta; ++t)
    for (std::size_t k = 0; k < K; ++k) {
      const double mu = inst.component(k).mean_cycles;
      std::int64_t v = 0;
      while (v < 1) v = std::llround(positive_normal(rng, mu, rel_sd * mu));
      cycles[k * theta + t] = v;
    }
  return SampleSet(K, params.theta, std::move(cycles), seed);
}

double server_load(const Instance& inst, const SampleSet& samples, const Placement& pl,
                   std::size_t s, int t) {
  check_placement(inst, pl);
  if (s >= inst.num_servers() || t < 0 || t >= samples.theta())
    throw ContractViolation("server_load index out of range");
  std::int64_t sum = 0;
  for (std::size_t k = 0; k < pl.size(); ++k)
    if (static_cast<std::size_t>(pl[k]) == s) sum += samples(k, t);
  return inst.servers()[s].cost_per_cycle * static_cast<double>(sum);
}

double overload_excess(const Instance& inst, const SampleSet& samples, const Placement& pl,
                       std::size_t s, int t) {
  return server_load(inst, samples, pl, s, t) - inst.servers()[s].capacity;
}

OverloadProfile overload_profile(const Instance& inst, const LoadTable& loads) {
  const auto stats = kernels::all_server_stats(inst, loads, default_exec());
  OverloadProfile out;
  out.theta = loads.theta();
  for (const auto& st : stats) {
    out.overload_count.push_back(st.overload_count);
    out.proportion.push_back(static_cast<double>(st.overload_count) / loads.theta());
    out.worst_excess.push_back(st.worst_excess);
  }
  return out;
}

OverloadProfile overload_profile(const Instance& inst, const SampleSet& samples,
                                 const Placement& pl, const SaaParams& params) {
  params.validate();
  return overload_profile(inst, LoadTable(inst, samples, pl));
}

bool is_feasible(const OverloadProfile& profile, const SaaParams& params) {
  const int limit = params.overload_threshold(profile.theta);
  return std::all_of(profile.overload_count.begin(), profile.overload_count.end(),
                     [limit](int c) { return c <= limit; });
}

double approx_success_prob(const SaaParams& params) {
  params.validate();
  const double gap = params.alpha - params.epsilon;
  return 1.0 - std::exp(-params.theta * gap * gap / (2.0 * params.epsilon));
}

}  // namespace dtplace
