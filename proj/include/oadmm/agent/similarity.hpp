#pragma once

#include "oadmm/agent/links.hpp"

namespace oadmm::agent {

/// One update of the multiplier-forgetting filter:
///   mu_k = eta * mu_{k-1} + (1 - eta) * min(rho / w, 1)
/// Elementwise; output stays in [0,1] when prev_mu starts there.
Eigen::VectorXd mu_filtered(const Eigen::VectorXd& prev_mu,
                            const Eigen::VectorXd& rho, double weight,
                            const MuConfig& cfg);

/// Converged-iterate snapshot of one control step, input to the offline
/// similarity estimator.
struct StepSnapshot {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
  Eigen::VectorXd rho;
};

struct SimilarityEstimate {
  double value = 0.0;
  bool degenerate = false;  // a reference norm was zero
};

/// Weighted relative-change similarity between two consecutive converged
/// steps, clamped to [0,1]. Meant for offline studies of mu, not the
/// control loop.
SimilarityEstimate mu_similarity_estimate(const StepSnapshot& at_t,
                                          const StepSnapshot& at_t_next,
                                          const MuConfig& cfg);

}  // namespace oadmm::agent
