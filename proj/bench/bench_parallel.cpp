// Compares the OpenMP drop loop against the serial path on a mid-size
// config and verifies they produce identical numbers.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cfsim/simulator.hpp"

using namespace cfsim;

int main() {
  SimConfig c;
  c.M = 10;
  c.N = 25;
  c.K = 40;
  c.tau_p = 40;
  c.alpha_list = {10};
  c.n_drops = 8;
  c.n_inner = 20;
  c.seed = 1;

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif

  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const ExperimentResult serial = run_experiment(c, ExecMode::Serial);
  const auto t1 = Clock::now();
  const ExperimentResult parallel = run_experiment(c, ExecMode::Parallel);
  const auto t2 = Clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();

  bool equal = serial.reports.size() == parallel.reports.size();
  for (std::size_t i = 0; equal && i < serial.reports.size(); ++i)
    equal = serial.reports[i].per_drop == parallel.reports[i].per_drop;

  std::printf("drops=%d inner=%d M=%d N=%d K=%d\n", c.n_drops, c.n_inner, c.M,
              c.N, c.K);
  std::printf("threads=%d serial=%.2fs parallel=%.2fs speedup=%.2fx\n",
              threads, ts, tp, ts / tp);
  std::printf("results identical: %s\n", equal ? "yes" : "NO");
  return equal ? 0 : 1;
}
