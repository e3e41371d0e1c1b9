#pragma once

#include <string>

#include "oadmm/bench/metrics.hpp"
#include "oadmm/sim/world.hpp"

namespace oadmm::bench {

/// Tuning-robustness grid: D in {0, 0.1, ..., 1} (11 values) and
/// w in {0.25, 0.5, ..., 5} (20 values); 220 combinations per solver.
struct SweepGrid {
  std::vector<double> min_distances;
  std::vector<double> weights;

  static SweepGrid standard();
  size_t combinations() const {
    return min_distances.size() * weights.size();
  }
};

struct SweepOptions {
  sim::ClockConfig clock;  // 30 s timeout per the tuning study
  sim::AgentDefaults defaults;
  SweepGrid grid = SweepGrid::standard();
  bool parallel = false;
};

struct SweepRecord {
  double min_distance = 0.0;
  double weight = 0.0;
  bool fixed_penalty = false;
  RunClass cls = RunClass::kResolved;
  double mean_delay = 0.0;  // NaN when no robot finished
  double run_msv = 0.0;
  double min_clearance = 0.0;
};

struct SweepReport {
  std::vector<SweepRecord> adaptive;  // OA-ADMM
  std::vector<SweepRecord> fixed;     // fixed-rho ADMM
  MetricsRecord adaptive_summary;
  MetricsRecord fixed_summary;
  double wall_seconds = 0.0;
};

/// Runs the 4-robot crossing for every grid combination with both solvers.
SweepReport run_sweep(const SweepOptions& options);

std::string sweep_csv(const SweepReport& report);
std::string sweep_summary_csv(const SweepReport& report);

}  // namespace oadmm::bench
