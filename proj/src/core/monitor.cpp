#include "oadmm/core/monitor.hpp"

namespace oadmm::core {

OnlineConvergenceReport online_convergence_monitor(const SolveTrace& step_t,
                                                   const SolveTrace& step_next) {
  OnlineConvergenceReport report;
  if (step_t.iterations.empty() || step_next.iterations.empty()) {
    report.indeterminate = true;
    return report;
  }

  const IterationRecord& proxy_t = step_t.back();
  const IterationRecord& proxy_next = step_next.back();

  report.x_contraction = (step_t.initial.x - proxy_t.x).norm() -
                         (step_t.back().x - proxy_t.x).norm();
  report.z_contraction = (step_t.initial.z - proxy_t.z).norm() -
                         (step_t.back().z - proxy_t.z).norm();
  report.x_drift = (proxy_next.x - proxy_t.x).norm();
  report.z_drift = (proxy_next.z - proxy_t.z).norm();

  report.x_dominates = report.x_contraction > report.x_drift;
  report.z_dominates = report.z_contraction > report.z_drift;
  return report;
}

}  // namespace oadmm::core
