#include <cmath>

#include "oadmm/core/solver.hpp"

namespace oadmm::core {

namespace {

void check_dimensions(const ConsensusProblem& problem, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& z, const Eigen::VectorXd& lambda,
                      const PenaltyVector& rho) {
  problem.validate();
  if (x.size() != problem.n() || z.size() != problem.m() ||
      lambda.size() != problem.p() || rho.size() != problem.p()) {
    throw std::invalid_argument("augmented_lagrangian: dimension mismatch");
  }
}

}  // namespace

double augmented_lagrangian(const ConsensusProblem& problem,
                            const IterateState& state) {
  check_dimensions(problem, state.x, state.z, state.lambda, state.rho);
  const Eigen::VectorXd residual = problem.A * state.x + problem.B * state.z - problem.c;
  return problem.f.value(state.x) + problem.g.value(state.z) +
         state.lambda.dot(residual) +
         0.5 * state.rho.scale_r(residual).squaredNorm();
}

Eigen::VectorXd augmented_lagrangian_grad_x(const ConsensusProblem& problem,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& lambda,
                                            const PenaltyVector& rho) {
  check_dimensions(problem, x, z, lambda, rho);
  const Eigen::VectorXd residual = problem.A * x + problem.B * z - problem.c;
  return problem.f.gradient(x) +
         problem.A.transpose() * (lambda + rho.scale_r2(residual));
}

Eigen::VectorXd augmented_lagrangian_grad_z(const ConsensusProblem& problem,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& lambda,
                                            const PenaltyVector& rho) {
  check_dimensions(problem, x, z, lambda, rho);
  const Eigen::VectorXd residual = problem.A * x + problem.B * z - problem.c;
  return problem.g.gradient(z) +
         problem.B.transpose() * (lambda + rho.scale_r2(residual));
}

ResidualPair compute_residuals(const ConsensusProblem& problem,
                               const IterateState& prev,
                               const IterateState& next) {
  if (prev.k + 1 != next.k) {
    throw std::invalid_argument("compute_residuals: iterates not consecutive");
  }
  check_dimensions(problem, next.x, next.z, next.lambda, prev.rho);
  ResidualPair out;
  out.r = problem.A * next.x + problem.B * next.z - problem.c;
  out.s = problem.A.transpose() *
          prev.rho.scale_r2(problem.B * (next.z - prev.z));
  return out;
}

Eigen::VectorXd lambda_step(const Eigen::VectorXd& lambda,
                            const PenaltyVector& rho, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& mu) {
  if (mu.size() != 1 && mu.size() != lambda.size()) {
    throw std::invalid_argument("lambda_step: mu must be scalar or p-vector");
  }
  if ((mu.array() < 0.0).any() || (mu.array() > 1.0).any()) {
    throw std::invalid_argument("lambda_step: mu must lie in [0,1]");
  }
  const Eigen::VectorXd scaled =
      mu.size() == 1 ? (mu[0] * lambda).eval()
                     : (mu.array() * lambda.array()).matrix().eval();
  return scaled + rho.scale_r2(r);
}

double lyapunov_value(const IterateState& state, const SaddlePoint& saddle,
                      const Eigen::MatrixXd& B) {
  // PenaltyVector construction already rejects non-positive rho.
  const Eigen::VectorXd dual_term =
      state.rho.scale_r_inv(state.lambda - saddle.lambda_star);
  const Eigen::VectorXd primal_term =
      state.rho.scale_r(B * (state.z - saddle.z_star));
  return dual_term.squaredNorm() + primal_term.squaredNorm();
}

}  // namespace oadmm::core
