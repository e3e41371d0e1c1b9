#pragma once

#include <string>

#include "oadmm/bench/delay_oracle.hpp"
#include "oadmm/bench/metrics.hpp"
#include "oadmm/sim/world.hpp"

namespace oadmm::bench {

struct BenchmarkOptions {
  sim::Protocol protocol = sim::Protocol::kOaAdmm;
  int fidelity = 8;
  int repetitions = 3;
  unsigned long seed = 1;
  sim::ClockConfig clock;
  sim::AgentDefaults defaults;
  DelayOracleConfig oracle;
  bool parallel = false;
};

/// One (case, repetition) outcome: joint run classified, per-vehicle delay
/// against that vehicle's solo run under the same protocol and speed draws.
struct RunOutcome {
  RunClass cls = RunClass::kResolved;
  double run_msv = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  std::vector<double> delays;            // NaN for unfinished vehicles
  std::vector<double> completion_times;  // joint run
  double wall_seconds = 0.0;
};

struct CaseSummary {
  sim::ConflictCase conflict_case;
  double mean_delay = 0.0;  // over vehicles and repetitions (finished only)
  double estimated_delay = 0.0;
  double mean_msv = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  int violations = 0;
  int timeouts = 0;
  int resolved = 0;
  double max_wall_seconds = 0.0;
};

struct BenchmarkReport {
  std::vector<CaseSummary> cases;  // enumerate_conflict_cases order
  MetricsRecord summary;
  double mean_estimated_delay = 0.0;
  double wall_seconds = 0.0;
};

/// Runs every conflict case `repetitions` times plus the per-vehicle solo
/// baselines, and aggregates delays, MSV, and classification counts.
/// Deterministic for a fixed seed.
BenchmarkReport run_benchmark(const BenchmarkOptions& options);

unsigned long run_seed(unsigned long base, int case_index, int repetition);

/// Per-case delay matrix (rows: ego maneuver; columns: other arm,maneuver).
std::string case_matrix_csv(const BenchmarkReport& report);
/// Estimated-delay matrix in the same layout.
std::string estimate_matrix_csv(const sim::IntersectionGeometry& geometry,
                                double reference_speed,
                                const DelayOracleConfig& config);
/// One summary row (protocol, fidelity, means, counts).
std::string summary_csv(const BenchmarkReport& report,
                        const BenchmarkOptions& options);
std::string summary_json(const BenchmarkReport& report,
                         const BenchmarkOptions& options);

}  // namespace oadmm::bench
