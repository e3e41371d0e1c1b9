#pragma once

#include <string>
#include <vector>

#include "oadmm/core/problem.hpp"

namespace oadmm::core {

/// Minimizes the augmented Lagrangian over x with (z, lambda, rho) fixed,
/// starting from x0. Must reach the subsolver's declared tolerance or throw.
using XSubsolver = std::function<Eigen::VectorXd(
    const ConsensusProblem&, const Eigen::VectorXd& x0, const Eigen::VectorXd& z,
    const Eigen::VectorXd& lambda, const PenaltyVector& rho)>;
/// Same over z with (x, lambda, rho) fixed.
using ZSubsolver = std::function<Eigen::VectorXd(
    const ConsensusProblem&, const Eigen::VectorXd& z0, const Eigen::VectorXd& x,
    const Eigen::VectorXd& lambda, const PenaltyVector& rho)>;

/// f(x) + g(z) + lambda'(Ax+Bz-c) + 0.5 ||R(Ax+Bz-c)||^2.
double augmented_lagrangian(const ConsensusProblem& problem,
                            const IterateState& state);

/// Gradient of the augmented Lagrangian in x (resp. z) at fixed partner.
Eigen::VectorXd augmented_lagrangian_grad_x(const ConsensusProblem& problem,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& lambda,
                                            const PenaltyVector& rho);
Eigen::VectorXd augmented_lagrangian_grad_z(const ConsensusProblem& problem,
                                            const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& z,
                                            const Eigen::VectorXd& lambda,
                                            const PenaltyVector& rho);

/// Primal and dual residuals between two consecutive iterates
/// (requires prev.k + 1 == next.k).
ResidualPair compute_residuals(const ConsensusProblem& problem,
                               const IterateState& prev,
                               const IterateState& next);

/// mu o lambda + rho o r, with scalar mu broadcast. mu must lie in [0,1].
Eigen::VectorXd lambda_step(const Eigen::VectorXd& lambda,
                            const PenaltyVector& rho, const Eigen::VectorXd& r,
                            const Eigen::VectorXd& mu);

/// ||R^-1 (lambda - lambda*)||^2 + ||R B (z - z*)||^2.
double lyapunov_value(const IterateState& state, const SaddlePoint& saddle,
                      const Eigen::MatrixXd& B);

struct IterationRecord {
  long k = 0;
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
  Eigen::VectorXd rho;
  Eigen::VectorXd r;
  Eigen::VectorXd s;
  double objective = 0.0;   // f(x) + g(z)
  double rho_delta = 0.0;   // ||rho_new - rho_old||_2, for settling checks

  double r_inf() const { return r.size() ? r.lpNorm<Eigen::Infinity>() : 0.0; }
  double s_inf() const { return s.size() ? s.lpNorm<Eigen::Infinity>() : 0.0; }
};

struct SolveTrace {
  IterateState initial;
  std::vector<IterationRecord> iterations;
  bool converged = false;

  const IterationRecord& back() const { return iterations.back(); }
};

/// Runs x-update, z-update, lambda-update, rho-update until both residual
/// infinity norms fall under the configured tolerances or the iteration cap
/// is hit (converged=false in that case, no exception). Subsolver failures
/// surface as SolverError with the failing iteration.
SolveTrace solve_static(const ConsensusProblem& problem,
                        const XSubsolver& x_subsolver,
                        const ZSubsolver& z_subsolver,
                        const SolverConfig& config, const IterateState& initial);

/// CSV rows (k, r_inf, s_inf, objective, rho_min, rho_max), with header.
std::string trace_to_csv(const SolveTrace& trace);

}  // namespace oadmm::core
