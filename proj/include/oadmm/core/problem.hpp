#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <utility>

namespace oadmm::core {

/// Convex objective term given by value and gradient callables.
struct Objective {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;

  static Objective zero();
  /// 0.5 x'Px + q'x with P symmetric positive semidefinite.
  static Objective quadratic(Eigen::MatrixXd P, Eigen::VectorXd q);
};

/// Consensus-form problem: min f(x) + g(z)  s.t.  A x + B z = c.
struct ConsensusProblem {
  Objective f;
  Objective g;
  Eigen::MatrixXd A;  // p x n
  Eigen::MatrixXd B;  // p x m
  Eigen::VectorXd c;  // p

  Eigen::Index n() const { return A.cols(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return c.size(); }

  /// Throws std::invalid_argument if the coupling dimensions disagree.
  void validate() const;
};

/// Positive penalty vector rho with the diagonal-matrix view R,
/// diag(R) = rho^(1/2) elementwise. All elements must be strictly
/// positive (construction rejects anything else).
class PenaltyVector {
 public:
  PenaltyVector() = default;
  explicit PenaltyVector(Eigen::VectorXd rho);

  static PenaltyVector constant(Eigen::Index size, double value);

  const Eigen::VectorXd& values() const { return rho_; }
  Eigen::Index size() const { return rho_.size(); }
  double min() const { return rho_.minCoeff(); }
  double max() const { return rho_.maxCoeff(); }

  /// R v  (elementwise sqrt(rho) scaling).
  Eigen::VectorXd scale_r(const Eigen::VectorXd& v) const;
  /// R^2 v = rho o v.
  Eigen::VectorXd scale_r2(const Eigen::VectorXd& v) const;
  /// R^(-1) v.
  Eigen::VectorXd scale_r_inv(const Eigen::VectorXd& v) const;

 private:
  Eigen::VectorXd rho_;
};

/// One OA-ADMM iterate: primal pair, multipliers, penalty, iteration
/// counter k within the current real-time step t.
struct IterateState {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd lambda;
  PenaltyVector rho;
  long k = 0;
  long t = 0;
};

struct ResidualPair {
  Eigen::VectorXd r;  // primal: A x + B z - c
  Eigen::VectorXd s;  // dual:   A' (rho o B (z_next - z_prev))
};

/// Known saddle point, used by the diagnostics and the test harness.
struct SaddlePoint {
  Eigen::VectorXd x_star;
  Eigen::VectorXd z_star;
  Eigen::VectorXd lambda_star;
  double p_star = 0.0;
};

using AdaptationFn =
    std::function<Eigen::VectorXd(const IterateState&, const ResidualPair&)>;
/// Returns a vector of size p (or size 1, broadcast) with entries in [0,1].
using SimilarityFn =
    std::function<Eigen::VectorXd(const IterateState&, const ResidualPair&)>;

/// phi that keeps the penalty unchanged (plain vector-penalty ADMM).
AdaptationFn keep_penalty();
/// mu identically one (full multiplier carry-over).
SimilarityFn unit_similarity();

struct SolverConfig {
  int max_iterations_per_step = 1000;
  double primal_tolerance = 1e-8;
  double dual_tolerance = 1e-8;
  AdaptationFn adaptation_fn = keep_penalty();
  SimilarityFn similarity_fn = unit_similarity();

  void validate() const;
};

/// Subsolver failure surfaced by solve_static, carrying the iteration
/// at which the subproblem could not be minimized.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_ = -1;
};

}  // namespace oadmm::core
