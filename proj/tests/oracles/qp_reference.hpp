#pragma once

#include <random>

#include "oadmm/core/solver.hpp"
#include "oadmm/core/subsolvers.hpp"

namespace oadmm::testing {

/// Random convex consensus QP:
///   min 0.5 x'Px + q'x + 0.5 z'Qz + r'z   s.t.  A x + B z = c
struct ConsensusQp {
  Eigen::MatrixXd P, Q, A, B;
  Eigen::VectorXd q, r, c;

  core::ConsensusProblem problem() const;
  core::XSubsolver x_subsolver() const;
  core::ZSubsolver z_subsolver() const;
  double objective(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;
};

ConsensusQp random_consensus_qp(std::mt19937_64& rng, int n, int m, int p);

/// Exact saddle point from the KKT system (independent of the ADMM path).
core::SaddlePoint kkt_solve(const ConsensusQp& qp);

}  // namespace oadmm::testing
