#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "dagrta/dag.hpp"
#include "dagrta/sim.hpp"
#include "dagrta/taskgen.hpp"

namespace fixtures {

using dagrta::Dag;
using dagrta::DagTask;
using dagrta::Time;

// Six subtasks, work 13, span 8. With full WCETs only 4 units land in the
// first 3 time units; if subtask 0 finishes immediately, 7 do.
inline Dag reconstruction_dag() {
  return Dag({2, 3, 2, 4, 1, 1}, {{0, 1}, {0, 2}, {0, 5}, {1, 5}, {2, 3}, {2, 4}});
}

inline Dag chain(std::vector<Time> wcets) {
  std::vector<dagrta::Edge> edges;
  for (int v = 0; v + 1 < static_cast<int>(wcets.size()); ++v) edges.push_back({v, v + 1});
  return Dag(std::move(wcets), std::move(edges));
}

inline Dag diamond(Time s, Time a, Time b, Time t) { return Dag({s, a, b, t}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}); }

// Two-processor scenario with a scripted higher-priority task: two
// independent 2-unit subtasks released at 0, 4, 7 and 11.
struct ScriptedScenario {
  dagrta::TaskSet ts;
  std::vector<dagrta::ScriptedJob> jobs;
  int analyzed_job = -1;  // index in the trace
};

inline ScriptedScenario scripted_scenario() {
  ScriptedScenario s;
  s.ts.processors = 2;
  s.ts.tasks.emplace_back(Dag({2, 2}, {}), 3, 3);
  s.ts.tasks.emplace_back(Dag({2, 3, 1, 3, 1, 3}, {{0, 1}, {0, 2}, {1, 5}, {2, 3}, {2, 4}, {4, 5}}), 20, 20);
  s.jobs = {{0, 0, {2, 2}}, {0, 4, {1, 1}}, {0, 7, {2, 2}}, {0, 11, {2, 2}}, {1, 0, {2, 1, 1, 3, 1, 3}}};
  return s;
}

inline dagrta::GenConfig small_config(int n_max, Time wcet_max, double p = 0.4) {
  dagrta::GenConfig c;
  c.n_min = 1;
  c.n_max = n_max;
  c.wcet_min = 0;
  c.wcet_max = wcet_max;
  c.edge_prob = p;
  return c;
}

// Work the full-WCET unrestricted ASAP schedule executes in [from, to).
inline Time asap_work_in(const Dag& g, Time from, Time to) {
  const auto s = dagrta::asap_start_times(g);
  Time total = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const Time a = std::max(from, s[v]);
    const Time b = std::min(to, s[v] + g.wcet(static_cast<int>(v)));
    total += std::max<Time>(b - a, 0);
  }
  return total;
}

// Largest workload a single-vertex task (WCET C, period T, response bound R)
// can place in [0, delta) on any number of processors: every job may run
// anywhere in [r, r + R], so it contributes min(C, |[r, r + R] & [0, delta)|).
// Releases are enumerated at unit granularity with gaps of at least T.
inline Time single_vertex_oracle(Time C, Time T, Time R, Time delta) {
  std::function<Time(Time)> from = [&](Time r) -> Time {
    if (r >= delta) return 0;
    const Time here = std::min(C, std::max<Time>(std::min(r + R, delta) - std::max<Time>(r, 0), 0));
    Time best = 0;
    for (Time next = r + T; next <= delta; ++next) best = std::max(best, from(next));
    return here + best;
  };
  Time best = 0;
  for (Time r0 = -R; r0 < delta; ++r0) best = std::max(best, from(r0));
  return best;
}

}  // namespace fixtures
