#include <cmath>
#include <memory>

#include "oadmm/core/subsolvers.hpp"

namespace oadmm::core {

XSubsolver exact_quadratic_x_subsolver(Eigen::MatrixXd P, Eigen::VectorXd q) {
  auto P_shared = std::make_shared<Eigen::MatrixXd>(std::move(P));
  auto q_shared = std::make_shared<Eigen::VectorXd>(std::move(q));
  return [P_shared, q_shared](const ConsensusProblem& problem,
                              const Eigen::VectorXd& /*x0*/,
                              const Eigen::VectorXd& z,
                              const Eigen::VectorXd& lambda,
                              const PenaltyVector& rho) {
    const Eigen::MatrixXd scaled_A =
        rho.values().asDiagonal() * problem.A;  // R^2 A
    const Eigen::MatrixXd H = *P_shared + problem.A.transpose() * scaled_A;
    const Eigen::VectorXd rhs =
        -*q_shared - problem.A.transpose() * lambda -
        problem.A.transpose() * rho.scale_r2(problem.B * z - problem.c);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("exact x-subsolver: LDLT factorization failed");
    }
    return ldlt.solve(rhs).eval();
  };
}

ZSubsolver exact_quadratic_z_subsolver(Eigen::MatrixXd Q, Eigen::VectorXd r) {
  auto Q_shared = std::make_shared<Eigen::MatrixXd>(std::move(Q));
  auto r_shared = std::make_shared<Eigen::VectorXd>(std::move(r));
  return [Q_shared, r_shared](const ConsensusProblem& problem,
                              const Eigen::VectorXd& /*z0*/,
                              const Eigen::VectorXd& x,
                              const Eigen::VectorXd& lambda,
                              const PenaltyVector& rho) {
    const Eigen::MatrixXd scaled_B = rho.values().asDiagonal() * problem.B;
    const Eigen::MatrixXd H = *Q_shared + problem.B.transpose() * scaled_B;
    const Eigen::VectorXd rhs =
        -*r_shared - problem.B.transpose() * lambda -
        problem.B.transpose() * rho.scale_r2(problem.A * x - problem.c);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success) {
      throw std::runtime_error("exact z-subsolver: LDLT factorization failed");
    }
    return ldlt.solve(rhs).eval();
  };
}

namespace {

Eigen::VectorXd project_box(const Eigen::VectorXd& v,
                            const std::optional<BoxBounds>& box) {
  if (!box) return v;
  return v.cwiseMax(box->lower).cwiseMin(box->upper);
}

// Projected gradient with Armijo backtracking on a smooth convex objective.
Eigen::VectorXd projected_gradient_minimize(
    const std::function<double(const Eigen::VectorXd&)>& value,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& gradient,
    const Eigen::VectorXd& start, const ProjectedGradientOptions& options) {
  Eigen::VectorXd x = project_box(start, options.box);
  double fx = value(x);
  double step = 1.0;
  constexpr double kArmijo = 1e-4;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::VectorXd g = gradient(x);
    const double pg_norm =
        (x - project_box(x - g, options.box)).lpNorm<Eigen::Infinity>();
    if (pg_norm <= options.tolerance) return x;

    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const Eigen::VectorXd trial = project_box(x - step * g, options.box);
      const double f_trial = value(trial);
      const double decrease = g.dot(x - trial);
      if (f_trial <= fx - kArmijo * decrease) {
        x = trial;
        fx = f_trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // Step collapsed to numerical noise; treat the point as stationary.
      const Eigen::VectorXd g2 = gradient(x);
      const double res =
          (x - project_box(x - g2, options.box)).lpNorm<Eigen::Infinity>();
      if (res <= 1e3 * options.tolerance) return x;
      throw std::runtime_error("projected gradient: line search failed");
    }
    step = std::min(step * 2.0, 1e6);
  }
  const Eigen::VectorXd g = gradient(x);
  if ((x - project_box(x - g, options.box)).lpNorm<Eigen::Infinity>() <=
      1e2 * options.tolerance) {
    return x;
  }
  throw std::runtime_error("projected gradient: iteration cap hit");
}

}  // namespace

XSubsolver projected_gradient_x_subsolver(ProjectedGradientOptions options) {
  return [options](const ConsensusProblem& problem, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& z, const Eigen::VectorXd& lambda,
                   const PenaltyVector& rho) {
    auto value = [&](const Eigen::VectorXd& x) {
      const Eigen::VectorXd res = problem.A * x + problem.B * z - problem.c;
      return problem.f.value(x) + lambda.dot(problem.A * x) +
             0.5 * rho.scale_r(res).squaredNorm();
    };
    auto gradient = [&](const Eigen::VectorXd& x) {
      return augmented_lagrangian_grad_x(problem, x, z, lambda, rho);
    };
    return projected_gradient_minimize(value, gradient, x0, options);
  };
}

ZSubsolver projected_gradient_z_subsolver(ProjectedGradientOptions options) {
  return [options](const ConsensusProblem& problem, const Eigen::VectorXd& z0,
                   const Eigen::VectorXd& x, const Eigen::VectorXd& lambda,
                   const PenaltyVector& rho) {
    auto value = [&](const Eigen::VectorXd& z) {
      const Eigen::VectorXd res = problem.A * x + problem.B * z - problem.c;
      return problem.g.value(z) + lambda.dot(problem.B * z) +
             0.5 * rho.scale_r(res).squaredNorm();
    };
    auto gradient = [&](const Eigen::VectorXd& z) {
      return augmented_lagrangian_grad_z(problem, x, z, lambda, rho);
    };
    return projected_gradient_minimize(value, gradient, z0, options);
  };
}

}  // namespace oadmm::core
