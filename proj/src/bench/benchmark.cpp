#include <chrono>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "oadmm/bench/benchmark.hpp"

namespace oadmm::bench {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

RunOutcome run_case(const sim::ConflictCase& conflict_case,
                    const BenchmarkOptions& options, unsigned long seed) {
  const double wall_start = now_seconds();
  const sim::ScenarioSpec spec = sim::scenario_from_case(
      conflict_case, options.protocol, seed, options.fidelity);

  sim::World joint = sim::World::from_scenario(spec, options.clock,
                                               options.defaults, -1,
                                               options.parallel);
  const sim::WorldTrace trace = joint.run();

  RunOutcome outcome;
  outcome.cls = classify(trace);
  outcome.run_msv = msv(trace);
  outcome.min_clearance = trace.min_clearance;
  outcome.completion_times = trace.completion_times;
  outcome.delays.assign(spec.vehicles.size(),
                        std::numeric_limits<double>::quiet_NaN());

  for (size_t v = 0; v < spec.vehicles.size(); ++v) {
    if (std::isnan(trace.completion_times[v])) continue;
    sim::World solo = sim::World::from_scenario(spec, options.clock,
                                                options.defaults,
                                                static_cast<int>(v),
                                                options.parallel);
    const sim::WorldTrace solo_trace = solo.run();
    if (std::isnan(solo_trace.completion_times[0])) continue;
    outcome.delays[v] =
        trace.completion_times[v] - solo_trace.completion_times[0];
  }
  outcome.wall_seconds = now_seconds() - wall_start;
  return outcome;
}

}  // namespace

unsigned long run_seed(unsigned long base, int case_index, int repetition) {
  unsigned long h = base ^ 0x9e3779b97f4a7c15UL;
  h ^= static_cast<unsigned long>(case_index + 1) * 0xbf58476d1ce4e5b9UL;
  h ^= static_cast<unsigned long>(repetition + 1) * 0x94d049bb133111ebUL;
  h ^= h >> 31;
  return h;
}

BenchmarkReport run_benchmark(const BenchmarkOptions& options) {
  const double wall_start = now_seconds();
  const std::vector<sim::ConflictCase> cases = sim::enumerate_conflict_cases();
  const int reps = options.repetitions;
  const int total = static_cast<int>(cases.size()) * reps;

  std::vector<RunOutcome> outcomes(static_cast<size_t>(total));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (options.parallel)
#endif
  for (int index = 0; index < total; ++index) {
    const int case_index = index / reps;
    const int rep = index % reps;
    outcomes[static_cast<size_t>(index)] =
        run_case(cases[static_cast<size_t>(case_index)], options,
                 run_seed(options.seed, case_index, rep));
  }

  BenchmarkReport report;
  report.mean_estimated_delay = mean_estimated_delay(
      sim::IntersectionGeometry{}, 4.0, options.oracle);

  double delay_sum = 0.0;
  long delay_count = 0;
  double time_sum = 0.0;
  long time_count = 0;
  double msv_sum = 0.0;

  for (size_t ci = 0; ci < cases.size(); ++ci) {
    CaseSummary summary;
    summary.conflict_case = cases[ci];
    summary.estimated_delay =
        estimated_delay(cases[ci], sim::IntersectionGeometry{}, 4.0,
                        options.oracle)
            .seconds;
    double case_delay_sum = 0.0;
    long case_delay_count = 0;
    for (int rep = 0; rep < reps; ++rep) {
      const RunOutcome& outcome =
          outcomes[ci * static_cast<size_t>(reps) + static_cast<size_t>(rep)];
      switch (outcome.cls) {
        case RunClass::kViolation: ++summary.violations; break;
        case RunClass::kTimeout: ++summary.timeouts; break;
        case RunClass::kResolved: ++summary.resolved; break;
      }
      summary.mean_msv += outcome.run_msv;
      summary.min_clearance =
          std::min(summary.min_clearance, outcome.min_clearance);
      summary.max_wall_seconds =
          std::max(summary.max_wall_seconds, outcome.wall_seconds);
      msv_sum += outcome.run_msv;
      for (double delay : outcome.delays) {
        if (std::isnan(delay)) continue;
        case_delay_sum += delay;
        ++case_delay_count;
      }
      for (double completion : outcome.completion_times) {
        if (std::isnan(completion)) continue;
        time_sum += completion;
        ++time_count;
      }
    }
    summary.mean_msv /= reps;
    summary.mean_delay = case_delay_count > 0
                             ? case_delay_sum / case_delay_count
                             : std::numeric_limits<double>::quiet_NaN();
    delay_sum += case_delay_sum;
    delay_count += case_delay_count;

    report.summary.violations += summary.violations;
    report.summary.timeouts += summary.timeouts;
    report.summary.resolved += summary.resolved;
    report.summary.min_clearance =
        std::min(report.summary.min_clearance, summary.min_clearance);
    report.cases.push_back(std::move(summary));
  }

  report.summary.runs = total;
  report.summary.mean_msv = msv_sum / total;
  report.summary.mean_time = time_count > 0 ? time_sum / time_count : 0.0;
  report.summary.mean_delay =
      delay_count > 0 ? delay_sum / delay_count : 0.0;
  report.summary.mean_added_delay =
      added_delay(report.summary.mean_delay, report.mean_estimated_delay);
  report.wall_seconds = now_seconds() - wall_start;
  return report;
}

namespace {

const char* maneuver_letter(sim::Maneuver m) {
  switch (m) {
    case sim::Maneuver::kLeft: return "L";
    case sim::Maneuver::kForward: return "F";
    case sim::Maneuver::kRight: return "R";
  }
  return "?";
}

std::string matrix_csv(const std::vector<double>& values27) {
  // rows: ego maneuver; columns: (other arm, other maneuver)
  std::string out =
      "ego,LL,LF,LR,FL,FF,FR,RL,RF,RR\n";
  const char* rows[3] = {"L", "F", "R"};
  char buf[64];
  for (int r = 0; r < 3; ++r) {
    out += rows[r];
    for (int c = 0; c < 9; ++c) {
      std::snprintf(buf, sizeof(buf), ",%.4f", values27[r * 9 + c]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string case_matrix_csv(const BenchmarkReport& report) {
  std::vector<double> values;
  values.reserve(report.cases.size());
  for (const CaseSummary& summary : report.cases) {
    values.push_back(summary.mean_delay);
  }
  return matrix_csv(values);
}

std::string estimate_matrix_csv(const sim::IntersectionGeometry& geometry,
                                double reference_speed,
                                const DelayOracleConfig& config) {
  const std::vector<EstimatedDelay> table =
      estimated_delay_table(geometry, reference_speed, config);
  std::vector<double> values;
  values.reserve(table.size());
  for (const EstimatedDelay& entry : table) values.push_back(entry.seconds);
  return matrix_csv(values);
}

std::string summary_csv(const BenchmarkReport& report,
                        const BenchmarkOptions& options) {
  std::string out =
      "protocol,fidelity,runs,resolved,violations,timeouts,mean_time,"
      "mean_delay,mean_estimated_delay,mean_added_delay,mean_msv,"
      "min_clearance\n";
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "%s,%d,%d,%d,%d,%d,%.6f,%.6f,%.6f,%.6f,%.9g,%.6f\n",
                sim::to_string(options.protocol), options.fidelity,
                report.summary.runs, report.summary.resolved,
                report.summary.violations, report.summary.timeouts,
                report.summary.mean_time, report.summary.mean_delay,
                report.mean_estimated_delay, report.summary.mean_added_delay,
                report.summary.mean_msv, report.summary.min_clearance);
  out += buf;
  return out;
}

std::string summary_json(const BenchmarkReport& report,
                         const BenchmarkOptions& options) {
  nlohmann::json j;
  j["protocol"] = sim::to_string(options.protocol);
  j["fidelity"] = options.fidelity;
  j["repetitions"] = options.repetitions;
  j["seed"] = options.seed;
  j["runs"] = report.summary.runs;
  j["resolved"] = report.summary.resolved;
  j["violations"] = report.summary.violations;
  j["timeouts"] = report.summary.timeouts;
  j["mean_time_s"] = report.summary.mean_time;
  j["mean_delay_s"] = report.summary.mean_delay;
  j["mean_estimated_delay_s"] = report.mean_estimated_delay;
  j["mean_added_delay_s"] = report.summary.mean_added_delay;
  j["mean_msv_m2"] = report.summary.mean_msv;
  j["min_clearance_m"] = report.summary.min_clearance;
  j["wall_seconds"] = report.wall_seconds;
  nlohmann::json cases = nlohmann::json::array();
  for (const CaseSummary& summary : report.cases) {
    nlohmann::json c;
    c["ego"] = maneuver_letter(summary.conflict_case.ego);
    c["other_arm"] = sim::to_string(summary.conflict_case.other_arm);
    c["other"] = maneuver_letter(summary.conflict_case.other);
    c["mean_delay_s"] = summary.mean_delay;
    c["estimated_delay_s"] = summary.estimated_delay;
    c["mean_msv_m2"] = summary.mean_msv;
    c["min_clearance_m"] = summary.min_clearance;
    c["resolved"] = summary.resolved;
    c["violations"] = summary.violations;
    c["timeouts"] = summary.timeouts;
    cases.push_back(std::move(c));
  }
  j["cases"] = std::move(cases);
  return j.dump(2) + "\n";
}

}  // namespace oadmm::bench
