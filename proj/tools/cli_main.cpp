#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oadmm/bench/benchmark.hpp"
#include "oadmm/bench/sweep.hpp"
#include "oadmm/core/subsolvers.hpp"
#include "oadmm/sim/world.hpp"

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

Eigen::MatrixXd parse_matrix(const nlohmann::json& j) {
  const size_t rows = j.size();
  const size_t cols = rows > 0 ? j.at(0).size() : 0;
  Eigen::MatrixXd m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j.at(r).at(c).get<double>();
    }
  }
  return m;
}

Eigen::VectorXd parse_vector(const nlohmann::json& j) {
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  }
  return v;
}

int cmd_solve(const std::string& problem_file, const std::string& out_dir) {
  std::ifstream in(problem_file);
  if (!in) {
    std::cerr << "cannot open " << problem_file << "\n";
    return 1;
  }
  nlohmann::json j;
  in >> j;

  using namespace oadmm::core;
  const Eigen::MatrixXd P = parse_matrix(j.at("P"));
  const Eigen::VectorXd q = parse_vector(j.at("q"));
  const Eigen::MatrixXd Q = parse_matrix(j.at("Q"));
  const Eigen::VectorXd r = parse_vector(j.at("r"));

  ConsensusProblem problem;
  problem.f = Objective::quadratic(P, q);
  problem.g = Objective::quadratic(Q, r);
  problem.A = parse_matrix(j.at("A"));
  problem.B = parse_matrix(j.at("B"));
  problem.c = parse_vector(j.at("c"));

  SolverConfig config;
  config.max_iterations_per_step = j.value("max_iterations", 2000);
  config.primal_tolerance = j.value("primal_tolerance", 1e-8);
  config.dual_tolerance = j.value("dual_tolerance", 1e-8);

  IterateState initial;
  initial.x = j.contains("x0") ? parse_vector(j.at("x0"))
                               : Eigen::VectorXd::Zero(problem.n());
  initial.z = j.contains("z0") ? parse_vector(j.at("z0"))
                               : Eigen::VectorXd::Zero(problem.m());
  initial.lambda = j.contains("lambda0") ? parse_vector(j.at("lambda0"))
                                         : Eigen::VectorXd::Zero(problem.p());
  if (j.contains("rho") && j.at("rho").is_array()) {
    initial.rho = PenaltyVector(parse_vector(j.at("rho")));
  } else {
    initial.rho =
        PenaltyVector::constant(problem.p(), j.value("rho", 1.0));
  }

  const SolveTrace trace =
      solve_static(problem, exact_quadratic_x_subsolver(P, q),
                   exact_quadratic_z_subsolver(Q, r), config, initial);

  write_file(fs::path(out_dir) / "trace.csv", trace_to_csv(trace));
  std::cout << (trace.converged ? "converged" : "not converged") << " in "
            << trace.iterations.size() << " iterations; |r|_inf="
            << (trace.iterations.empty() ? 0.0 : trace.back().r_inf())
            << " |s|_inf="
            << (trace.iterations.empty() ? 0.0 : trace.back().s_inf()) << "\n";
  std::cout << "wrote " << (fs::path(out_dir) / "trace.csv").string() << "\n";
  return trace.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Decentralized multi-agent conflict resolution: OA-ADMM solver, "
      "intersection simulator, baselines, and benchmark harness"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  unsigned long seed = 1;
  double control_hz = 20.0;
  double physics_hz = 160.0;
  double timeout_s = 30.0;
  int iterations_per_step = 1;
  bool serial = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", out_dir, "output directory");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--control-hz", control_hz, "control rate (Hz)");
    cmd->add_option("--physics-hz", physics_hz, "physics substep rate (Hz)");
    cmd->add_option("--timeout-s", timeout_s, "simulation timeout (s)");
    cmd->add_option("--iterations-per-step", iterations_per_step,
                    "OA-ADMM iterations per control step");
    cmd->add_flag("--serial", serial, "disable OpenMP fan-out");
  };

  // solve
  auto* solve = app.add_subcommand(
      "solve", "solve a static consensus problem from a JSON file");
  std::string problem_file;
  solve->add_option("problem", problem_file, "problem JSON file")->required();
  add_common(solve);

  // scenario
  auto* scenario =
      app.add_subcommand("scenario", "run one scenario file and export traces");
  std::string scenario_file;
  scenario->add_option("file", scenario_file, "scenario file")->required();
  add_common(scenario);

  // benchmark
  auto* benchmark = app.add_subcommand(
      "benchmark", "run the conflict-case benchmark for one protocol");
  std::string protocol_name = "oadmm";
  int fidelity = 8;
  int repetitions = 3;
  benchmark->add_option("--protocol", protocol_name,
                        "none | oadmm | reactive | predictive");
  benchmark->add_option("--fidelity", fidelity, "grid fidelity (1, 4, 8)");
  benchmark->add_option("--repetitions", repetitions, "repetitions per case");
  add_common(benchmark);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "run the 220-combination tuning sweep for both solvers");
  add_common(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      return cmd_solve(problem_file, out_dir);
    }

    oadmm::sim::ClockConfig clock;
    clock.control_hz = control_hz;
    clock.physics_hz = physics_hz;
    clock.timeout_s = timeout_s;
    clock.validate();

    oadmm::sim::AgentDefaults defaults;
    defaults.iterations_per_step = iterations_per_step;

    if (scenario->parsed()) {
      oadmm::sim::ScenarioSpec spec =
          oadmm::sim::load_scenario_file(scenario_file);
      if (seed != 1) spec.seed = seed;
      oadmm::sim::World world = oadmm::sim::World::from_scenario(
          spec, clock, defaults, -1, !serial);
      const oadmm::sim::WorldTrace trace = world.run();
      write_file(fs::path(out_dir) / "trace.csv",
                 oadmm::sim::trace_to_csv(trace));
      nlohmann::json j;
      j["protocol"] = oadmm::sim::to_string(spec.protocol);
      j["seed"] = spec.seed;
      j["timed_out"] = trace.timed_out;
      j["duration_s"] = trace.duration;
      j["min_clearance_m"] = trace.min_clearance;
      j["completion_times_s"] = trace.completion_times;
      j["degraded_ticks"] = trace.degraded_ticks;
      j["relaxed_ticks"] = trace.relaxed_ticks;
      j["dominance_checked"] = trace.dominance_checked;
      j["dominance_holds"] = trace.dominance_holds;
      write_file(fs::path(out_dir) / "summary.json", j.dump(2) + "\n");
      std::cout << "duration " << trace.duration << " s, min clearance "
                << trace.min_clearance << " m"
                << (trace.timed_out ? " (timed out)" : "") << "\n";
      std::cout << "wrote " << out_dir << "/trace.csv and summary.json\n";
      return 0;
    }

    if (benchmark->parsed()) {
      oadmm::bench::BenchmarkOptions options;
      if (protocol_name == "none") options.protocol = oadmm::sim::Protocol::kNone;
      else if (protocol_name == "oadmm") options.protocol = oadmm::sim::Protocol::kOaAdmm;
      else if (protocol_name == "reactive") options.protocol = oadmm::sim::Protocol::kReactive;
      else if (protocol_name == "predictive") options.protocol = oadmm::sim::Protocol::kPredictive;
      else throw std::invalid_argument("unknown protocol: " + protocol_name);
      options.fidelity = fidelity;
      options.repetitions = repetitions;
      options.seed = seed;
      options.clock = clock;
      options.defaults = defaults;
      options.parallel = !serial;

      const oadmm::bench::BenchmarkReport report =
          oadmm::bench::run_benchmark(options);
      write_file(fs::path(out_dir) / "case_matrix.csv",
                 oadmm::bench::case_matrix_csv(report));
      write_file(fs::path(out_dir) / "estimated_delays.csv",
                 oadmm::bench::estimate_matrix_csv(
                     oadmm::sim::IntersectionGeometry{}, 4.0, options.oracle));
      write_file(fs::path(out_dir) / "summary.csv",
                 oadmm::bench::summary_csv(report, options));
      write_file(fs::path(out_dir) / "summary.json",
                 oadmm::bench::summary_json(report, options));
      std::cout << oadmm::bench::summary_csv(report, options);
      std::cout << "wrote reports to " << out_dir << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      oadmm::bench::SweepOptions options;
      options.clock = clock;
      options.defaults = defaults;
      options.parallel = !serial;
      const oadmm::bench::SweepReport report = oadmm::bench::run_sweep(options);
      write_file(fs::path(out_dir) / "sweep.csv",
                 oadmm::bench::sweep_csv(report));
      write_file(fs::path(out_dir) / "sweep_summary.csv",
                 oadmm::bench::sweep_summary_csv(report));
      std::cout << oadmm::bench::sweep_summary_csv(report);
      std::cout << "wrote reports to " << out_dir << " in "
                << report.wall_seconds << " s\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
