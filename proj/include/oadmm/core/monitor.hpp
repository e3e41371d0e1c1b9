#pragma once

#include "oadmm/core/solver.hpp"

namespace oadmm::core {

/// Online-convergence diagnostic for two consecutive control-step traces.
/// Saddle proxies are the final iterates of each trace; contraction is the
/// distance gained toward the proxy over the step's iterations, and must
/// strictly exceed the proxy drift between steps for dominance.
struct OnlineConvergenceReport {
  bool indeterminate = false;
  double x_contraction = 0.0;
  double x_drift = 0.0;
  double z_contraction = 0.0;
  double z_drift = 0.0;
  bool x_dominates = false;
  bool z_dominates = false;

  bool dominates() const { return x_dominates && z_dominates; }
};

OnlineConvergenceReport online_convergence_monitor(const SolveTrace& step_t,
                                                   const SolveTrace& step_next);

}  // namespace oadmm::core
