#include <cstdio>
#include <limits>

#include "oadmm/sim/trace.hpp"

namespace oadmm::sim {

int WorldTrace::pair_index(int i, int j, int n) {
  if (i > j) std::swap(i, j);
  // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::string trace_to_csv(const WorldTrace& trace) {
  std::string out = "tick,vehicle,x,y,v,min_clearance\n";
  char line[192];
  const int n = trace.vehicle_count;
  for (size_t tick = 0; tick < trace.times.size(); ++tick) {
    for (int v = 0; v < n; ++v) {
      double min_clear = std::numeric_limits<double>::infinity();
      for (int other = 0; other < n; ++other) {
        if (other == v) continue;
        min_clear = std::min(
            min_clear,
            trace.clearances[tick][static_cast<size_t>(
                WorldTrace::pair_index(v, other, n))]);
      }
      const auto& s = trace.states[tick][static_cast<size_t>(v)];
      if (n > 1) {
        std::snprintf(line, sizeof(line), "%zu,%d,%.9g,%.9g,%.9g,%.9g\n", tick,
                      v, s[0], s[1], s[2], min_clear);
      } else {
        std::snprintf(line, sizeof(line), "%zu,%d,%.9g,%.9g,%.9g,\n", tick, v,
                      s[0], s[1], s[2]);
      }
      out += line;
    }
  }
  return out;
}

}  // namespace oadmm::sim
