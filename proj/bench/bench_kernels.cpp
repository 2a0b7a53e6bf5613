// Times the serial reference kernels against their OpenMP versions and checks
// that both produce the same answer.
//
//   bench_kernels [--quick]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>

#include "dtplace/kernels.hpp"
#include "dtplace/local_search.hpp"
#include "dtplace/oracle.hpp"

using namespace dtplace;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool same_moves(const std::vector<kernels::MoveEval>& a, const std::vector<kernels::MoveEval>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].kind != b[i].kind || a[i].target != b[i].target || a[i].to != b[i].to || a[i].feasible != b[i].feasible ||
        a[i].delta.offload != b[i].delta.offload || a[i].delta.communication != b[i].delta.communication)
      return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  configure_threads_from_env();
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  const int reps = quick ? 2 : 50;
  std::printf("threads: %d\n", omp_get_max_threads());
  bool ok = true;

  {
    GenConfig gen;
    gen.num_servers = 10;
    gen.num_devices = 10;
    gen.components_hi = 5;
    const Instance inst = generate_instance(gen, 11);
    const SaaParams params{0.01, 0.005, quick ? 200 : 1850};
    const SampleSet samples = draw_samples(inst, params, 12);
    const SearchState st = random_feasible_state(inst, samples, params, 13);
    const int thr = params.overload_threshold();

    std::vector<kernels::MoveEval> a, b;
    const double ts = time_ms(reps, [&] {
      a = kernels::scan_moves(inst, samples, st.placement, st.loads, thr, true, Exec::serial);
    });
    const double tp = time_ms(reps, [&] {
      b = kernels::scan_moves(inst, samples, st.placement, st.loads, thr, true, Exec::parallel);
    });
    const bool eq = same_moves(a, b);
    ok &= eq;
    std::printf("scan_moves      %4zu moves x %4d scenarios  serial %8.3f ms  omp %8.3f ms  %s\n",
                a.size(), samples.theta(), ts, tp, eq ? "match" : "MISMATCH");

    std::vector<kernels::ServerStats> sa, sb;
    const double ss = time_ms(reps, [&] { sa = kernels::all_server_stats(inst, st.loads, Exec::serial); });
    const double sp = time_ms(reps, [&] { sb = kernels::all_server_stats(inst, st.loads, Exec::parallel); });
    bool seq = sa.size() == sb.size();
    for (std::size_t i = 0; seq && i < sa.size(); ++i)
      seq = sa[i].overload_count == sb[i].overload_count && sa[i].worst_excess == sb[i].worst_excess;
    ok &= seq;
    std::printf("server_stats    %4zu servers                serial %8.3f ms  omp %8.3f ms  %s\n",
                sa.size(), ss, sp, seq ? "match" : "MISMATCH");
  }

  {
    GenConfig gen;
    gen.num_servers = 3;
    gen.num_devices = quick ? 4 : 6;
    gen.components_lo = 2;
    gen.components_hi = 2;
    const Instance inst = generate_instance(gen, 21);
    const SaaParams params{0.01, 0.005, 200};
    const SampleSet samples = draw_samples(inst, params, 22);
    OracleResult a, b;
    const double ts = time_ms(1, [&] { a = exact_solve(inst, samples, params, 2'000'000, Exec::serial); });
    const double tp = time_ms(1, [&] { b = exact_solve(inst, samples, params, 2'000'000, Exec::parallel); });
    const bool eq = a.optimum == b.optimum && a.argmin == b.argmin;
    ok &= eq;
    std::printf("exact_solve     %8llu placements         serial %8.3f ms  omp %8.3f ms  %s\n",
                static_cast<unsigned long long>(a.states_enumerated), ts, tp, eq ? "match" : "MISMATCH");
  }
  return ok ? 0 : 1;
}
