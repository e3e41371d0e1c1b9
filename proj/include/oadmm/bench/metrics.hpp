#pragma once

#include "oadmm/sim/trace.hpp"

namespace oadmm::bench {

/// Run classification. Precedence: any negative clearance counts the run as
/// a violation even if it also timed out; otherwise a timeout; resolved
/// only when neither happened.
enum class RunClass { kViolation, kTimeout, kResolved };

RunClass classify(const sim::WorldTrace& trace);
const char* to_string(RunClass c);

/// Mean square constraint violation: mean over all (tick, pair) samples of
/// max(0, -clearance)^2. Zero for violation-free traces.
double msv(const sim::WorldTrace& trace);

/// measured mean delay minus estimated mean delay.
double added_delay(double measured_mean_delay, double estimated_mean_delay);

struct MetricsRecord {
  double mean_time = 0.0;
  double mean_delay = 0.0;
  double mean_added_delay = 0.0;
  double min_clearance = std::numeric_limits<double>::infinity();
  double mean_msv = 0.0;
  int timeouts = 0;
  int violations = 0;
  int resolved = 0;
  int runs = 0;
};

}  // namespace oadmm::bench
