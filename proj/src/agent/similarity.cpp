#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oadmm/agent/similarity.hpp"

namespace oadmm::agent {

void MuConfig::validate() const {
  if (eta < 0.0 || eta > 1.0) {
    throw std::invalid_argument("MuConfig: eta must lie in [0,1]");
  }
  const double sum = w_x + w_z + w_lambda + w_rho;
  if (w_x < 0.0 || w_z < 0.0 || w_lambda < 0.0 || w_rho < 0.0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument(
        "MuConfig: estimator weights must be nonnegative and sum to 1");
  }
}

Eigen::VectorXd mu_filtered(const Eigen::VectorXd& prev_mu,
                            const Eigen::VectorXd& rho, double weight,
                            const MuConfig& cfg) {
  cfg.validate();
  if (prev_mu.size() != rho.size()) {
    throw std::invalid_argument("mu_filtered: size mismatch");
  }
  const Eigen::ArrayXd capped = (rho.array() / weight).min(1.0);
  return (cfg.eta * prev_mu.array() + (1.0 - cfg.eta) * capped).matrix();
}

namespace {

// 1 - |q(t+dt) - q(t)| / |q(t)|, with a degenerate flag on zero reference.
double relative_term(const Eigen::VectorXd& ref, const Eigen::VectorXd& next,
                     bool& degenerate) {
  const double ref_norm = ref.norm();
  if (ref_norm <= 0.0) {
    degenerate = true;
    return 0.0;
  }
  return 1.0 - (next - ref).norm() / ref_norm;
}

}  // namespace

SimilarityEstimate mu_similarity_estimate(const StepSnapshot& at_t,
                                          const StepSnapshot& at_t_next,
                                          const MuConfig& cfg) {
  cfg.validate();
  SimilarityEstimate out;
  double value = 0.0;
  if (cfg.w_x > 0.0) {
    value += cfg.w_x * relative_term(at_t.x, at_t_next.x, out.degenerate);
  }
  if (cfg.w_z > 0.0) {
    value += cfg.w_z * relative_term(at_t.z, at_t_next.z, out.degenerate);
  }
  if (cfg.w_lambda > 0.0) {
    value +=
        cfg.w_lambda * relative_term(at_t.lambda, at_t_next.lambda, out.degenerate);
  }
  if (cfg.w_rho > 0.0) {
    value += cfg.w_rho * relative_term(at_t.rho, at_t_next.rho, out.degenerate);
  }
  if (out.degenerate) {
    out.value = 0.0;
    return out;
  }
  out.value = std::clamp(value, 0.0, 1.0);
  return out;
}

}  // namespace oadmm::agent
