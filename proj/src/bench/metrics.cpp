#include <algorithm>

#include "oadmm/bench/metrics.hpp"

namespace oadmm::bench {

RunClass classify(const sim::WorldTrace& trace) {
  if (trace.min_clearance < 0.0) return RunClass::kViolation;
  if (trace.timed_out) return RunClass::kTimeout;
  return RunClass::kResolved;
}

const char* to_string(RunClass c) {
  switch (c) {
    case RunClass::kViolation: return "violation";
    case RunClass::kTimeout: return "timeout";
    case RunClass::kResolved: return "resolved";
  }
  return "?";
}

double msv(const sim::WorldTrace& trace) {
  long samples = 0;
  double sum = 0.0;
  for (const std::vector<double>& tick : trace.clearances) {
    for (double clearance : tick) {
      const double penetration = std::max(0.0, -clearance);
      sum += penetration * penetration;
      ++samples;
    }
  }
  return samples > 0 ? sum / static_cast<double>(samples) : 0.0;
}

double added_delay(double measured_mean_delay, double estimated_mean_delay) {
  return measured_mean_delay - estimated_mean_delay;
}

}  // namespace oadmm::bench
