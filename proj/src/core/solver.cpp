#include <cstdio>

#include "oadmm/core/solver.hpp"

namespace oadmm::core {

SolveTrace solve_static(const ConsensusProblem& problem,
                        const XSubsolver& x_subsolver,
                        const ZSubsolver& z_subsolver,
                        const SolverConfig& config,
                        const IterateState& initial) {
  problem.validate();
  config.validate();
  if (initial.x.size() != problem.n() || initial.z.size() != problem.m() ||
      initial.lambda.size() != problem.p() ||
      initial.rho.size() != problem.p()) {
    throw std::invalid_argument("solve_static: initial iterate dimensions");
  }

  SolveTrace trace;
  trace.initial = initial;
  trace.iterations.reserve(static_cast<size_t>(config.max_iterations_per_step));

  IterateState state = initial;
  for (int iter = 1; iter <= config.max_iterations_per_step; ++iter) {
    IterateState next;
    next.k = state.k + 1;
    next.t = state.t;
    try {
      next.x = x_subsolver(problem, state.x, state.z, state.lambda, state.rho);
      next.z = z_subsolver(problem, state.z, next.x, state.lambda, state.rho);
    } catch (const SolverError&) {
      throw;
    } catch (const std::exception& e) {
      throw SolverError(std::string("subsolver failed: ") + e.what(), iter);
    }
    if (!next.x.allFinite() || !next.z.allFinite()) {
      throw SolverError("subsolver returned non-finite iterate", iter);
    }

    next.lambda = state.lambda;  // placeholder for residual computation
    next.rho = state.rho;
    const ResidualPair residuals = compute_residuals(problem, state, next);

    const Eigen::VectorXd mu = config.similarity_fn(state, residuals);
    next.lambda = lambda_step(state.lambda, state.rho, residuals.r, mu);

    IterateState for_phi = next;
    const PenaltyVector rho_next(config.adaptation_fn(for_phi, residuals));
    if (rho_next.size() != problem.p()) {
      throw std::invalid_argument("solve_static: phi returned wrong size");
    }

    IterationRecord record;
    record.k = next.k;
    record.x = next.x;
    record.z = next.z;
    record.lambda = next.lambda;
    record.rho = state.rho.values();  // rho used for this iteration's updates
    record.r = residuals.r;
    record.s = residuals.s;
    record.objective = problem.f.value(next.x) + problem.g.value(next.z);
    record.rho_delta = (rho_next.values() - state.rho.values()).norm();
    trace.iterations.push_back(std::move(record));

    next.rho = rho_next;
    state = next;

    if (trace.iterations.back().r_inf() <= config.primal_tolerance &&
        trace.iterations.back().s_inf() <= config.dual_tolerance) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::string out = "k,r_inf,s_inf,objective,rho_min,rho_max\n";
  char line[256];
  for (const IterationRecord& rec : trace.iterations) {
    std::snprintf(line, sizeof(line), "%ld,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  rec.k, rec.r_inf(), rec.s_inf(), rec.objective,
                  rec.rho.minCoeff(), rec.rho.maxCoeff());
    out += line;
  }
  return out;
}

}  // namespace oadmm::core
