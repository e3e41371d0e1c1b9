#include <memory>

#include "oadmm/core/problem.hpp"

namespace oadmm::core {

Objective Objective::zero() {
  return Objective{[](const Eigen::VectorXd&) { return 0.0; },
                   [](const Eigen::VectorXd& v) {
                     return Eigen::VectorXd::Zero(v.size()).eval();
                   }};
}

Objective Objective::quadratic(Eigen::MatrixXd P, Eigen::VectorXd q) {
  auto P_shared = std::make_shared<Eigen::MatrixXd>(std::move(P));
  auto q_shared = std::make_shared<Eigen::VectorXd>(std::move(q));
  Objective out;
  out.value = [P_shared, q_shared](const Eigen::VectorXd& v) {
    return 0.5 * v.dot(*P_shared * v) + q_shared->dot(v);
  };
  out.gradient = [P_shared, q_shared](const Eigen::VectorXd& v) {
    return (*P_shared * v + *q_shared).eval();
  };
  return out;
}

void ConsensusProblem::validate() const {
  if (A.rows() != c.size() || B.rows() != c.size()) {
    throw std::invalid_argument(
        "ConsensusProblem: A and B must have p rows matching c");
  }
  if (!f.value || !f.gradient || !g.value || !g.gradient) {
    throw std::invalid_argument("ConsensusProblem: f and g must be callable");
  }
}

PenaltyVector::PenaltyVector(Eigen::VectorXd rho) : rho_(std::move(rho)) {
  if (rho_.size() == 0 || (rho_.array() <= 0.0).any()) {
    throw std::invalid_argument(
        "PenaltyVector: all elements must be strictly positive");
  }
}

PenaltyVector PenaltyVector::constant(Eigen::Index size, double value) {
  return PenaltyVector(Eigen::VectorXd::Constant(size, value));
}

Eigen::VectorXd PenaltyVector::scale_r(const Eigen::VectorXd& v) const {
  return (rho_.array().sqrt() * v.array()).matrix();
}

Eigen::VectorXd PenaltyVector::scale_r2(const Eigen::VectorXd& v) const {
  return (rho_.array() * v.array()).matrix();
}

Eigen::VectorXd PenaltyVector::scale_r_inv(const Eigen::VectorXd& v) const {
  return (v.array() / rho_.array().sqrt()).matrix();
}

AdaptationFn keep_penalty() {
  return [](const IterateState& state, const ResidualPair&) {
    return state.rho.values();
  };
}

SimilarityFn unit_similarity() {
  return [](const IterateState&, const ResidualPair&) {
    return Eigen::VectorXd::Ones(1).eval();
  };
}

void SolverConfig::validate() const {
  if (max_iterations_per_step <= 0) {
    throw std::invalid_argument("SolverConfig: max_iterations_per_step <= 0");
  }
  if (primal_tolerance <= 0.0 || dual_tolerance <= 0.0) {
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  }
  if (!adaptation_fn || !similarity_fn) {
    throw std::invalid_argument("SolverConfig: phi and mu must be callable");
  }
}

}  // namespace oadmm::core
