#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>

#include "oadmm/bench/sweep.hpp"

namespace oadmm::bench {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Solo crossing time for one robot with the given importance weight;
// the sweep's delay baseline.
double solo_time(double weight, bool fixed_penalty,
                 const sim::ClockConfig& clock,
                 const sim::AgentDefaults& base) {
  sim::AgentDefaults defaults = base;
  defaults.phi.weight = weight;
  defaults.fixed_penalty = fixed_penalty;

  const double spawn = 12.0;
  const double finish = 2.0 * spawn;
  sim::VehicleSetup setup;
  setup.path = sim::make_line_path({-spawn, 0.0}, {1.0, 0.0}, finish + 16.0,
                                   finish);
  setup.model = agent::DynamicsModel::kHolonomic;
  setup.v_ref = 3.0;
  setup.shape = sim::default_shape(agent::DynamicsModel::kHolonomic);

  std::vector<sim::VehicleSetup> robots;
  robots.push_back(std::move(setup));
  sim::World world(std::move(robots), sim::Protocol::kOaAdmm, clock, defaults);
  const sim::WorldTrace trace = world.run();
  return trace.completion_times[0];
}

}  // namespace

SweepGrid SweepGrid::standard() {
  SweepGrid grid;
  for (int i = 0; i <= 10; ++i) grid.min_distances.push_back(0.1 * i);
  for (int i = 1; i <= 20; ++i) grid.weights.push_back(0.25 * i);
  return grid;
}

SweepReport run_sweep(const SweepOptions& options) {
  const double wall_start = now_seconds();
  SweepReport report;

  const size_t combos = options.grid.combinations();
  report.adaptive.resize(combos);
  report.fixed.resize(combos);

  // Per-robot solo baselines depend on (weight, solver mode) only; the
  // horizontal robots run with doubled weight.
  std::map<std::pair<double, bool>, double> solo_cache;
  auto solo_for = [&](double weight, bool fixed) {
    const auto key = std::make_pair(weight, fixed);
    auto it = solo_cache.find(key);
    if (it != solo_cache.end()) return it->second;
    const double value = solo_time(weight, fixed, options.clock,
                                   options.defaults);
    solo_cache.emplace(key, value);
    return value;
  };
  for (double w : options.grid.weights) {
    for (bool fixed : {false, true}) {
      solo_for(2.0 * w, fixed);
      solo_for(w, fixed);
    }
  }

  const int total = static_cast<int>(combos) * 2;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (options.parallel)
#endif
  for (int index = 0; index < total; ++index) {
    const bool fixed = index >= static_cast<int>(combos);
    const size_t combo = static_cast<size_t>(index) % combos;
    const double min_distance =
        options.grid.min_distances[combo / options.grid.weights.size()];
    const double weight =
        options.grid.weights[combo % options.grid.weights.size()];

    const sim::WorldTrace trace = sim::four_robot_crossing(
        min_distance, weight, fixed, options.clock, options.defaults);

    SweepRecord record;
    record.min_distance = min_distance;
    record.weight = weight;
    record.fixed_penalty = fixed;
    record.cls = classify(trace);
    record.run_msv = msv(trace);
    record.min_clearance = trace.min_clearance;

    double delay_sum = 0.0;
    int delay_count = 0;
    for (size_t v = 0; v < trace.completion_times.size(); ++v) {
      if (std::isnan(trace.completion_times[v])) continue;
      const double weight_v = v < 2 ? 2.0 * weight : weight;
      delay_sum += trace.completion_times[v] - solo_for(weight_v, fixed);
      ++delay_count;
    }
    record.mean_delay = delay_count > 0
                            ? delay_sum / delay_count
                            : std::numeric_limits<double>::quiet_NaN();
    (fixed ? report.fixed : report.adaptive)[combo] = record;
  }

  auto summarize = [](const std::vector<SweepRecord>& records) {
    MetricsRecord summary;
    summary.runs = static_cast<int>(records.size());
    double delay_sum = 0.0;
    int delay_count = 0;
    double msv_sum = 0.0;
    for (const SweepRecord& record : records) {
      switch (record.cls) {
        case RunClass::kViolation: ++summary.violations; break;
        case RunClass::kTimeout: ++summary.timeouts; break;
        case RunClass::kResolved: ++summary.resolved; break;
      }
      msv_sum += record.run_msv;
      summary.min_clearance =
          std::min(summary.min_clearance, record.min_clearance);
      if (!std::isnan(record.mean_delay)) {
        delay_sum += record.mean_delay;
        ++delay_count;
      }
    }
    summary.mean_msv = msv_sum / static_cast<double>(records.size());
    summary.mean_delay = delay_count > 0 ? delay_sum / delay_count : 0.0;
    return summary;
  };
  report.adaptive_summary = summarize(report.adaptive);
  report.fixed_summary = summarize(report.fixed);
  report.wall_seconds = now_seconds() - wall_start;
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  std::string out =
      "solver,min_distance,weight,class,mean_delay,msv,min_clearance\n";
  char buf[192];
  auto emit = [&](const std::vector<SweepRecord>& records, const char* name) {
    for (const SweepRecord& record : records) {
      std::snprintf(buf, sizeof(buf), "%s,%.2f,%.2f,%s,%.6f,%.9g,%.6f\n", name,
                    record.min_distance, record.weight, to_string(record.cls),
                    record.mean_delay, record.run_msv, record.min_clearance);
      out += buf;
    }
  };
  emit(report.adaptive, "oa-admm");
  emit(report.fixed, "admm");
  return out;
}

std::string sweep_summary_csv(const SweepReport& report) {
  std::string out =
      "solver,runs,timeouts,violations,resolved,mean_delay,mean_msv\n";
  char buf[192];
  auto emit = [&](const MetricsRecord& summary, const char* name) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%d,%.4f,%.6g\n", name,
                  summary.runs, summary.timeouts, summary.violations,
                  summary.resolved, summary.mean_delay, summary.mean_msv);
    out += buf;
  };
  emit(report.adaptive_summary, "oa-admm");
  emit(report.fixed_summary, "admm");
  return out;
}

}  // namespace oadmm::bench
