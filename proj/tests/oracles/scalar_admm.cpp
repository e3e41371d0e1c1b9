#include "oracles/scalar_admm.hpp"

namespace oadmm::testing {

ScalarAdmmTrace scalar_admm_reference(const ConsensusQp& qp, double rho,
                                      const Eigen::VectorXd& x0,
                                      const Eigen::VectorXd& z0,
                                      const Eigen::VectorXd& lambda0,
                                      int iterations) {
  ScalarAdmmTrace trace;
  Eigen::VectorXd x = x0, z = z0, lambda = lambda0;

  const Eigen::MatrixXd Hx = qp.P + rho * qp.A.transpose() * qp.A;
  const Eigen::MatrixXd Hz = qp.Q + rho * qp.B.transpose() * qp.B;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt_x(Hx);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt_z(Hz);

  for (int k = 0; k < iterations; ++k) {
    x = ldlt_x.solve(-qp.q - qp.A.transpose() * lambda -
                     rho * qp.A.transpose() * (qp.B * z - qp.c));
    z = ldlt_z.solve(-qp.r - qp.B.transpose() * lambda -
                     rho * qp.B.transpose() * (qp.A * x - qp.c));
    lambda += rho * (qp.A * x + qp.B * z - qp.c);
    trace.x.push_back(x);
    trace.z.push_back(z);
    trace.lambda.push_back(lambda);
  }
  return trace;
}

}  // namespace oadmm::testing
