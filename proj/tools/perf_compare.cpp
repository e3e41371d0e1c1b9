// Compares the serial reference execution of the simulation kernels against
// the OpenMP fan-out: per-tick agent updates (4-robot crossing) and a slice
// of the tuning sweep. Verifies that both paths produce identical traces.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oadmm/bench/metrics.hpp"
#include "oadmm/sim/world.hpp"

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double trace_checksum(const oadmm::sim::WorldTrace& trace) {
  double sum = 0.0;
  for (const auto& tick : trace.states) {
    for (const auto& row : tick) sum += row[0] + row[1] + row[2];
  }
  for (const auto& tick : trace.clearances) {
    for (double c : tick) sum += c;
  }
  return sum;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not available; both paths run serially\n");
#endif

  oadmm::sim::ClockConfig clock;
  oadmm::sim::AgentDefaults defaults;

  std::printf("\n-- 4-robot crossing, per-tick agent fan-out --\n");
  double serial_time = 0.0;
  double serial_checksum = 0.0;
  {
    const double t0 = now_seconds();
    const oadmm::sim::WorldTrace trace = oadmm::sim::four_robot_crossing(
        0.5, 2.0, false, clock, defaults, /*parallel_agents=*/false);
    serial_time = now_seconds() - t0;
    serial_checksum = trace_checksum(trace);
    std::printf("serial : %.3f s (%s)\n", serial_time,
                oadmm::bench::to_string(oadmm::bench::classify(trace)));
  }
  {
    const double t0 = now_seconds();
    const oadmm::sim::WorldTrace trace = oadmm::sim::four_robot_crossing(
        0.5, 2.0, false, clock, defaults, /*parallel_agents=*/true);
    const double parallel_time = now_seconds() - t0;
    const double checksum = trace_checksum(trace);
    std::printf("openmp : %.3f s (speedup %.2fx, traces %s)\n", parallel_time,
                serial_time / parallel_time,
                checksum == serial_checksum ? "identical" : "DIFFER");
  }

  std::printf("\n-- sweep slice (12 combinations x 2 solvers) --\n");
  auto run_slice = [&](bool parallel) {
    double checksum = 0.0;
    const double t0 = now_seconds();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : checksum) \
    if (parallel)
#endif
    for (int i = 0; i < 24; ++i) {
      const double min_distance = 0.1 * (i % 4);
      const double weight = 0.5 + 1.5 * ((i / 4) % 3);
      const bool fixed = i >= 12;
      const oadmm::sim::WorldTrace trace = oadmm::sim::four_robot_crossing(
          min_distance, weight, fixed, clock, defaults, false);
      checksum += trace_checksum(trace);
    }
    const double elapsed = now_seconds() - t0;
    return std::make_pair(elapsed, checksum);
  };
  const auto [t_serial, c_serial] = run_slice(false);
  std::printf("serial : %.3f s\n", t_serial);
  const auto [t_parallel, c_parallel] = run_slice(true);
  std::printf("openmp : %.3f s (speedup %.2fx, results %s)\n", t_parallel,
              t_serial / t_parallel,
              c_serial == c_parallel ? "identical" : "DIFFER");
  return 0;
}
