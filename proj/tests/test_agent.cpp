#include <doctest.h>

#include <random>

#include "oadmm/agent/adaptation.hpp"
#include "oadmm/agent/copy_qp.hpp"
#include "oadmm/agent/local_problem.hpp"
#include "oadmm/agent/oadmm_agent.hpp"
#include "oadmm/agent/similarity.hpp"

using namespace oadmm;
using agent::DynamicsModel;

namespace {

agent::PhiConfig phi_config(double D, double w, double a, double lo, double hi) {
  agent::PhiConfig cfg;
  cfg.min_distance = D;
  cfg.weight = w;
  cfg.exponent = a;
  cfg.phi_min = lo;
  cfg.phi_max = hi;
  return cfg;
}

agent::LocalProblem holonomic_problem(int horizon, double dt = 0.1) {
  agent::LocalProblem local;
  local.model = DynamicsModel::kHolonomic;
  local.horizon = horizon;
  local.dt = dt;
  local.q_v = 1.0;
  local.q_lat = 0.5;
  local.r_a = 0.05;
  local.r_beta = 0.0;
  local.input_lower = {-2.0, -2.0};
  local.input_upper = {2.0, 2.0};
  local.v_ref_vec = {1.0, 0.0};
  local.lateral_distance = [](const Eigen::Vector2d& p, Eigen::Vector2d* grad) {
    if (grad != nullptr) *grad = Eigen::Vector2d(0.0, p.y() >= 0.0 ? 1.0 : -1.0);
    return std::abs(p.y());
  };
  local.tolerance = 1e-8;
  local.max_iterations = 4000;
  return local;
}

agent::VehicleState holonomic_state(double x, double y, double vx, double vy) {
  agent::VehicleState s;
  s.model = DynamicsModel::kHolonomic;
  s.raw << x, y, vx, vy;
  return s;
}

agent::SelfLink zero_self_link(int flat, double rho) {
  agent::SelfLink link;
  link.z = Eigen::VectorXd::Zero(flat);
  link.lambda = Eigen::VectorXd::Zero(flat);
  link.rho = Eigen::VectorXd::Constant(flat, rho);
  link.mu = Eigen::VectorXd::Ones(flat);
  return link;
}

}  // namespace

TEST_CASE("phi: clamp and shape examples") {
  CHECK(agent::phi_from_clearance(4.0, phi_config(2, 1, 2, 0.1, 10)) ==
        doctest::Approx(0.25));
  CHECK(agent::phi_from_clearance(100.0, phi_config(1, 2, 1, 0.1, 10)) ==
        doctest::Approx(0.2));
  CHECK(agent::phi_from_clearance(1e-9, phi_config(2, 1, 2, 0.1, 10)) ==
        doctest::Approx(10.0));
  CHECK(agent::phi_from_clearance(-0.5, phi_config(2, 1, 2, 0.1, 10)) ==
        doctest::Approx(10.0));
  // D = 0 lower-clamps without dividing by zero
  CHECK(agent::phi_from_clearance(3.0, phi_config(0, 1, 2, 0.1, 10)) ==
        doctest::Approx(0.1));
}

TEST_CASE("phi self: neighbor mean with the second exponent") {
  const Eigen::Index horizon = 2;
  std::vector<Eigen::VectorXd> phis;
  phis.push_back(Eigen::VectorXd::Constant(horizon, 0.5));
  phis.push_back(Eigen::VectorXd::Constant(horizon, 2.0));

  Eigen::VectorXd out =
      agent::phi_self(phis, horizon, phi_config(1, 1, 1, 0.1, 10));
  CHECK(out[0] == doctest::Approx(1.25));

  phis.clear();
  phis.push_back(Eigen::VectorXd::Constant(horizon, 10.0));
  out = agent::phi_self(phis, horizon, phi_config(1, 1, 1, 0.1, 10));
  CHECK(out[0] == doctest::Approx(10.0));

  phis.clear();
  phis.push_back(Eigen::VectorXd::Constant(horizon, 1.0));
  phis.push_back(Eigen::VectorXd::Constant(horizon, 3.0));
  out = agent::phi_self(phis, horizon, phi_config(1, 1, 2, 0.1, 10));
  CHECK(out[0] == doctest::Approx(5.0));

  // no neighbors: w * phi_min
  out = agent::phi_self({}, horizon, phi_config(1, 2, 2, 0.1, 10));
  CHECK(out[0] == doctest::Approx(0.2));
}

TEST_CASE("phi bounds and monotone pressure properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> clearance(-5.0, 50.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const agent::PhiConfig cfg =
        phi_config(5.0 * pick(rng), 0.25 + 5.0 * pick(rng),
                   0.5 + 2.5 * pick(rng), 0.05 + pick(rng) * 0.5,
                   2.0 + 10.0 * pick(rng));
    const double d1 = clearance(rng);
    const double d2 = clearance(rng);
    const double p1 = agent::phi_from_clearance(d1, cfg);
    const double p2 = agent::phi_from_clearance(d2, cfg);
    CHECK(p1 >= cfg.weight * cfg.phi_min - 1e-15);
    CHECK(p1 <= cfg.weight * cfg.phi_max + 1e-15);
    // decreasing clearance weakly increases pressure
    if (d1 < d2) {
      CHECK(p1 >= p2 - 1e-12);
    } else if (d2 < d1) {
      CHECK(p2 >= p1 - 1e-12);
    }
  }
}

TEST_CASE("mu filter: examples and bounds") {
  agent::MuConfig cfg;
  cfg.eta = 0.5;
  Eigen::VectorXd prev = Eigen::VectorXd::Ones(2);
  Eigen::VectorXd rho(2);
  rho << 0.4, 2.0;
  Eigen::VectorXd out = agent::mu_filtered(prev, rho, 1.0, cfg);
  CHECK(out[0] == doctest::Approx(0.7));
  CHECK(out[1] == doctest::Approx(1.0));

  cfg.eta = 1.0;
  prev << 0.3, 0.9;
  out = agent::mu_filtered(prev, rho, 1.0, cfg);
  CHECK(out[0] == doctest::Approx(0.3));
  CHECK(out[1] == doctest::Approx(0.9));

  cfg.eta = 0.0;
  out = agent::mu_filtered(prev, Eigen::VectorXd::Constant(2, 0.3), 1.0, cfg);
  CHECK(out[0] == doctest::Approx(0.3));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    cfg.eta = pick(rng);
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(1, pick(rng));
    const Eigen::VectorXd r = Eigen::VectorXd::Constant(1, 20.0 * pick(rng));
    const double w = 0.25 + 5.0 * pick(rng);
    const double value = agent::mu_filtered(p, r, w, cfg)[0];
    CHECK(value >= 0.0);
    CHECK(value <= 1.0);
  }
}

TEST_CASE("mu similarity estimate") {
  agent::MuConfig cfg;  // quarter weights
  agent::StepSnapshot a;
  a.x = Eigen::VectorXd::Ones(4);
  a.z = Eigen::VectorXd::Ones(4);
  a.lambda = Eigen::VectorXd::Ones(4);
  a.rho = Eigen::VectorXd::Ones(4);

  SUBCASE("identical traces give 1") {
    const agent::SimilarityEstimate est = agent::mu_similarity_estimate(a, a, cfg);
    CHECK_FALSE(est.degenerate);
    CHECK(est.value == doctest::Approx(1.0));
  }
  SUBCASE("doubled x with full x weight gives 0") {
    agent::MuConfig only_x;
    only_x.w_x = 1.0;
    only_x.w_z = only_x.w_lambda = only_x.w_rho = 0.0;
    agent::StepSnapshot b = a;
    b.x = 2.0 * a.x;
    CHECK(agent::mu_similarity_estimate(a, b, only_x).value ==
          doctest::Approx(0.0));
  }
  SUBCASE("10 percent x change with quarter weights") {
    agent::StepSnapshot b = a;
    b.x = 1.1 * a.x;
    CHECK(agent::mu_similarity_estimate(a, b, cfg).value ==
          doctest::Approx(0.975));
  }
  SUBCASE("zero-norm reference flags degenerate input") {
    agent::StepSnapshot z = a;
    z.x.setZero();
    const agent::SimilarityEstimate est = agent::mu_similarity_estimate(z, a, cfg);
    CHECK(est.degenerate);
    CHECK(est.value == 0.0);
  }
}

TEST_CASE("x-update: dominant self penalty reproduces the copy") {
  agent::LocalProblem local = holonomic_problem(8);
  const agent::VehicleState start = holonomic_state(0, 0, 1.0, 0.0);

  Eigen::MatrixXd target_inputs(8, 2);
  for (int k = 0; k < 8; ++k) {
    target_inputs(k, 0) = 0.3 * std::sin(0.5 * k);
    target_inputs(k, 1) = 0.1 * std::cos(0.4 * k);
  }
  const agent::TrajectoryPlan target =
      agent::rollout(start, target_inputs, local.dt, local.bicycle);

  agent::SelfLink self = zero_self_link(8 * 4, 1e6);
  self.z = target.flatten();

  const agent::XUpdateResult result =
      agent::x_update(local, start, Eigen::MatrixXd::Zero(8, 2), self, {});
  CHECK_FALSE(result.degraded);
  CHECK((result.plan.flatten() - target.flatten()).lpNorm<Eigen::Infinity>() <
        1e-3);
}

TEST_CASE("x-update: vanishing penalty tracks the reference") {
  agent::LocalProblem local = holonomic_problem(6);
  const agent::VehicleState start = holonomic_state(0, 0.5, 0.8, 0.0);

  agent::SelfLink self = zero_self_link(6 * 4, 1e-9);
  const agent::XUpdateResult result =
      agent::x_update(local, start, Eigen::MatrixXd::Zero(6, 2), self, {});
  CHECK_FALSE(result.degraded);
  CHECK(result.projected_gradient_norm <= local.tolerance);
  CHECK(std::abs(result.plan.states(5, 1)) < 0.5);   // y pulled toward 0
  CHECK(result.plan.states(5, 2) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("x-update: 2-step holonomic toy matches exhaustive grid search") {
  agent::LocalProblem local = holonomic_problem(2, 0.5);
  const agent::VehicleState start = holonomic_state(0, 0, 0.5, 0.2);

  const int flat = 2 * 4;
  agent::SelfLink self = zero_self_link(flat, 0.4);
  std::vector<agent::NeighborLink> links(1);
  agent::NeighborLink& link = links[0];
  link.neighbor_id = 1;
  link.z_remote = Eigen::VectorXd::Zero(flat);
  link.z_remote << 0.4, 0.1, 0.6, 0.1, 0.9, 0.2, 0.7, 0.0;
  link.lambda_remote = Eigen::VectorXd::Constant(flat, 0.05);
  link.rho_remote = Eigen::VectorXd::Constant(flat, 0.8);
  link.neighbor_plan.model = DynamicsModel::kHolonomic;

  const std::vector<agent::ConsensusPull> pulls =
      agent::collect_x_pulls(self, links);

  const agent::XUpdateResult result =
      agent::x_update(local, start, Eigen::MatrixXd::Zero(2, 2), self, links);
  CHECK_FALSE(result.degraded);
  const double solver_value =
      agent::x_objective(local, start, result.inputs, pulls, false).value;

  double best = std::numeric_limits<double>::infinity();
  const int steps = 13;
  Eigen::MatrixXd u(2, 2);
  for (int a0 = 0; a0 < steps; ++a0) {
    for (int b0 = 0; b0 < steps; ++b0) {
      for (int a1 = 0; a1 < steps; ++a1) {
        for (int b1 = 0; b1 < steps; ++b1) {
          u(0, 0) = -2.0 + 4.0 * a0 / (steps - 1);
          u(0, 1) = -2.0 + 4.0 * b0 / (steps - 1);
          u(1, 0) = -2.0 + 4.0 * a1 / (steps - 1);
          u(1, 1) = -2.0 + 4.0 * b1 / (steps - 1);
          best = std::min(
              best, agent::x_objective(local, start, u, pulls, false).value);
        }
      }
    }
  }
  CHECK(solver_value <= best + 1e-9);  // beats every grid point
}

TEST_CASE("x-update gradient matches finite differences (both models)") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> normal(0.0, 0.5);
  for (DynamicsModel model :
       {DynamicsModel::kHolonomic, DynamicsModel::kBicycle}) {
    for (int trial = 0; trial < 5; ++trial) {
      agent::LocalProblem local = holonomic_problem(5);
      local.model = model;
      agent::VehicleState start;
      start.model = model;
      start.raw << normal(rng), normal(rng), normal(rng), 1.0 + normal(rng);
      if (model == DynamicsModel::kBicycle) {
        local.v_ref = 2.0;
        local.r_beta = 0.4;
        local.input_lower = {-3.0, -0.6};
        local.input_upper = {3.0, 0.6};
      }

      const int dim = agent::TrajectoryPlan::state_dim_for(model);
      const int flat = 5 * dim;
      agent::SelfLink self = zero_self_link(flat, 0.7);
      for (int i = 0; i < flat; ++i) self.z[i] = normal(rng);
      for (int i = 0; i < flat; ++i) self.lambda[i] = normal(rng);
      const std::vector<agent::ConsensusPull> pulls =
          agent::collect_x_pulls(self, {});

      Eigen::MatrixXd inputs(5, 2);
      for (int k = 0; k < 5; ++k) {
        inputs(k, 0) = 0.5 * normal(rng);
        inputs(k, 1) = 0.2 * normal(rng);
      }
      const agent::XObjective obj =
          agent::x_objective(local, start, inputs, pulls, true);
      const double h = 1e-6;
      for (int k = 0; k < 5; ++k) {
        for (int c = 0; c < 2; ++c) {
          Eigen::MatrixXd up = inputs, down = inputs;
          up(k, c) += h;
          down(k, c) -= h;
          const double fd =
              (agent::x_objective(local, start, up, pulls, false).value -
               agent::x_objective(local, start, down, pulls, false).value) /
              (2 * h);
          CHECK(obj.input_gradient(k, c) == doctest::Approx(fd).epsilon(1e-5));
        }
      }
    }
  }
}

TEST_CASE("z-update: inactive constraints return the plans exactly") {
  agent::LocalProblem local = holonomic_problem(4);
  const agent::TrajectoryPlan plan_a = agent::rollout(
      holonomic_state(0, 0, 1, 0), Eigen::MatrixXd::Zero(4, 2), local.dt,
      local.bicycle);
  const agent::TrajectoryPlan plan_b = agent::rollout(
      holonomic_state(0, 50, 1, 0), Eigen::MatrixXd::Zero(4, 2), local.dt,
      local.bicycle);

  agent::SelfLink self = zero_self_link(16, 1.0);
  self.z = plan_a.flatten();
  std::vector<agent::NeighborLink> links(1);
  links[0].neighbor_id = 1;
  links[0].neighbor_plan = plan_b;
  links[0].neighbor_shape = geom::CapsuleTemplate{0.0, 0.5};
  links[0].z_local = plan_b.flatten();
  links[0].lambda_local = Eigen::VectorXd::Zero(16);
  links[0].rho_local = Eigen::VectorXd::Constant(16, 1.0);

  const agent::ZUpdateResult result = agent::z_update(
      plan_a, geom::CapsuleTemplate{0.0, 0.5}, self, links, {});
  CHECK_FALSE(result.constrained);
  CHECK((result.z_self - plan_a.flatten()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((result.z_neighbors[0] - plan_b.flatten()).lpNorm<Eigen::Infinity>() ==
        0.0);
}

TEST_CASE("z-update: unconstrained stationarity is x + lambda/(2 rho)") {
  agent::LocalProblem local = holonomic_problem(3);
  const agent::TrajectoryPlan plan = agent::rollout(
      holonomic_state(0, 0, 1, 0), Eigen::MatrixXd::Zero(3, 2), local.dt,
      local.bicycle);

  agent::SelfLink self = zero_self_link(12, 0.8);
  self.lambda = Eigen::VectorXd::Constant(12, 0.4);
  const agent::ZUpdateResult result =
      agent::z_update(plan, geom::CapsuleTemplate{0.0, 0.5}, self, {}, {});
  const Eigen::VectorXd expected =
      plan.flatten().array() + 0.4 / (2.0 * 0.8);
  CHECK((result.z_self - expected).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("z-update: head-on overlapping plans get separated copies") {
  agent::LocalProblem local = holonomic_problem(5);
  const geom::CapsuleTemplate shape{0.0, 0.5};
  const agent::TrajectoryPlan plan_a =
      agent::rollout(holonomic_state(-1.0, 0, 2.0, 0),
                     Eigen::MatrixXd::Zero(5, 2), local.dt, local.bicycle);
  const agent::TrajectoryPlan plan_b =
      agent::rollout(holonomic_state(1.0, 0, -2.0, 0),
                     Eigen::MatrixXd::Zero(5, 2), local.dt, local.bicycle);

  agent::SelfLink self = zero_self_link(20, 2.0);
  self.z = plan_a.flatten();
  std::vector<agent::NeighborLink> links(1);
  links[0].neighbor_id = 1;
  links[0].neighbor_plan = plan_b;
  links[0].neighbor_shape = shape;
  links[0].z_local = plan_b.flatten();
  links[0].lambda_local = Eigen::VectorXd::Zero(20);
  links[0].rho_local = Eigen::VectorXd::Constant(20, 2.0);

  agent::ZUpdateOptions options;
  options.margin = 0.02;
  const agent::ZUpdateResult result =
      agent::z_update(plan_a, shape, self, links, options);
  CHECK(result.constrained);

  const agent::TrajectoryPlan copy_self = agent::TrajectoryPlan::unflatten(
      DynamicsModel::kHolonomic, local.dt, result.z_self, plan_a.headings);
  const agent::TrajectoryPlan copy_other = agent::TrajectoryPlan::unflatten(
      DynamicsModel::kHolonomic, local.dt, result.z_neighbors[0],
      plan_b.headings);
  const Eigen::VectorXd clearances =
      agent::clearance_along_plans(copy_self, copy_other, shape, shape);
  for (Eigen::Index k = 0; k < clearances.size(); ++k) {
    CHECK(clearances[k] >= -1e-6);
  }
}

TEST_CASE("agent lambda update: mu handling across iterations") {
  agent::AgentConfig config;
  config.local = holonomic_problem(3);
  config.shape = geom::CapsuleTemplate{0.0, 0.5};
  config.phi = phi_config(1.0, 1.0, 1.0, 0.1, 10.0);
  config.mu.eta = 0.0;  // filter jumps straight to min(rho/w, 1)

  agent::OaAdmmAgent agent_i(0, config, holonomic_state(0, 0, 1, 0));
  agent_i.begin_step(holonomic_state(0, 0, 1, 0));
  agent_i.run_x_update();
  agent_i.run_z_update();

  // x == z (no neighbors, lambda = 0): multipliers stay zero under any mu
  agent_i.run_lambda_update();
  CHECK(agent_i.self_link().lambda.lpNorm<Eigen::Infinity>() < 1e-12);

  // later iterations in the same control step force mu = 1
  agent_i.end_iteration();
  agent_i.run_x_update();
  agent_i.run_z_update();
  const Eigen::VectorXd lambda_before = agent_i.self_link().lambda;
  const Eigen::VectorXd x_flat = agent_i.plan().flatten();
  const Eigen::VectorXd z = agent_i.self_link().z;
  const Eigen::VectorXd rho = agent_i.self_link().rho;
  agent_i.run_lambda_update();
  const Eigen::VectorXd expected =
      lambda_before.array() + rho.array() * (x_flat - z).array();
  CHECK((agent_i.self_link().lambda - expected).lpNorm<Eigen::Infinity>() <
        1e-12);
}

TEST_CASE("trajectory flatten/unflatten round trip") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  agent::TrajectoryPlan plan;
  plan.model = DynamicsModel::kBicycle;
  plan.dt = 0.05;
  plan.states = Eigen::MatrixXd::NullaryExpr(
      6, 5, [&](Eigen::Index, Eigen::Index) { return normal(rng); });
  plan.headings = Eigen::VectorXd::Zero(6);

  const Eigen::VectorXd flat = plan.flatten();
  const agent::TrajectoryPlan back = agent::TrajectoryPlan::unflatten(
      DynamicsModel::kBicycle, 0.05, flat, plan.headings);
  CHECK((back.states - plan.states).lpNorm<Eigen::Infinity>() == 0.0);
}
