#include "dagrta/sim.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace dagrta {

namespace {

// Dispatch order: lower task index first, then earlier job, then lower id.
using Key = std::tuple<int, Time, int, int>;  // task, release, job, subtask

class Engine {
 public:
  Engine(const TaskSet& ts, ScheduleTrace& trace)
      : ts_(ts),
        tr_(trace),
        remaining_(trace.jobs.size()),
        pending_(trace.jobs.size()),
        left_(trace.jobs.size(), 0) {}

  void run() {
    const int m = tr_.processors;
    std::vector<std::optional<std::pair<int, int>>> on(static_cast<std::size_t>(m));
    std::vector<int> open(static_cast<std::size_t>(m), -1);  // segment index being extended
    std::size_t next_job = 0;
    Time t = tr_.jobs.empty() ? 0 : tr_.jobs.front().release;
    for (;;) {
      while (next_job < tr_.jobs.size() && tr_.jobs[next_job].release <= t) release(static_cast<int>(next_job++), t);

      // Pick the m highest-priority ready subtasks.
      std::vector<std::pair<int, int>> chosen;
      for (auto it = ready_.begin(); it != ready_.end() && static_cast<int>(chosen.size()) < m; ++it)
        chosen.emplace_back(std::get<2>(*it), std::get<3>(*it));
      std::vector<std::optional<std::pair<int, int>>> next_on(static_cast<std::size_t>(m));
      std::vector<bool> placed(chosen.size(), false);
      for (std::size_t p = 0; p < on.size(); ++p) {
        if (!on[p]) continue;
        auto it = std::find(chosen.begin(), chosen.end(), *on[p]);
        if (it != chosen.end()) {
          next_on[p] = *it;
          placed[static_cast<std::size_t>(it - chosen.begin())] = true;
        }
      }
      std::size_t p = 0;
      for (std::size_t c = 0; c < chosen.size(); ++c) {
        if (placed[c]) continue;
        while (next_on[p]) ++p;
        next_on[p] = chosen[c];
      }
      for (std::size_t q = 0; q < on.size(); ++q)
        if (next_on[q] != on[q]) open[q] = -1;
      on = std::move(next_on);

      Time next = -1;
      if (next_job < tr_.jobs.size()) next = tr_.jobs[next_job].release;
      for (const auto& slot : on) {
        if (!slot) continue;
        const Time end = t + remaining_[static_cast<std::size_t>(slot->first)][static_cast<std::size_t>(slot->second)];
        if (next < 0 || end < next) next = end;
      }
      if (next < 0) break;
      if (chosen.empty()) {
        t = next;
        continue;
      }

      for (std::size_t q = 0; q < on.size(); ++q) {
        if (!on[q]) continue;
        const auto [job, sub] = *on[q];
        if (open[q] >= 0) {
          tr_.segments[static_cast<std::size_t>(open[q])].end = next;
        } else {
          open[q] = static_cast<int>(tr_.segments.size());
          tr_.segments.push_back({tr_.jobs[static_cast<std::size_t>(job)].task, job, sub, static_cast<int>(q), t, next});
        }
        remaining_[static_cast<std::size_t>(job)][static_cast<std::size_t>(sub)] -= next - t;
      }
      t = next;
      for (std::size_t q = 0; q < on.size(); ++q) {
        if (!on[q]) continue;
        const auto [job, sub] = *on[q];
        if (remaining_[static_cast<std::size_t>(job)][static_cast<std::size_t>(sub)] == 0) {
          ready_.erase(key(job, sub));
          on[q].reset();
          open[q] = -1;
          finish(job, sub, t);
        }
      }
    }
    std::sort(tr_.segments.begin(), tr_.segments.end(), [](const Segment& a, const Segment& b) {
      return a.start != b.start ? a.start < b.start : a.processor < b.processor;
    });
  }

 private:
  Key key(int job, int sub) const {
    const JobRecord& j = tr_.jobs[static_cast<std::size_t>(job)];
    return {j.task, j.release, job, sub};
  }

  const Dag& dag_of(int job) const {
    return ts_.tasks[static_cast<std::size_t>(tr_.jobs[static_cast<std::size_t>(job)].task)].dag();
  }

  void release(int job, Time t) {
    const Dag& g = dag_of(job);
    JobRecord& j = tr_.jobs[static_cast<std::size_t>(job)];
    const std::size_t n = g.size();
    remaining_[static_cast<std::size_t>(job)] = j.exec;
    auto& pend = pending_[static_cast<std::size_t>(job)];
    pend.resize(n);
    for (std::size_t v = 0; v < n; ++v) pend[v] = static_cast<int>(g.predecessors(static_cast<int>(v)).size());
    left_[static_cast<std::size_t>(job)] = static_cast<int>(n);
    if (n == 0) j.completion = t;
    // Collect sources first: zero-length ones finish at once and may ready
    // their successors during the loop.
    std::vector<int> sources;
    for (std::size_t v = 0; v < n; ++v)
      if (pend[v] == 0) sources.push_back(static_cast<int>(v));
    for (int v : sources) make_ready(job, v, t);
  }

  void make_ready(int job, int v, Time t) {
    JobRecord& j = tr_.jobs[static_cast<std::size_t>(job)];
    j.ready[static_cast<std::size_t>(v)] = t;
    if (remaining_[static_cast<std::size_t>(job)][static_cast<std::size_t>(v)] == 0) {
      finish(job, v, t);
    } else {
      ready_.insert(key(job, v));
    }
  }

  void finish(int job, int v, Time t) {
    JobRecord& j = tr_.jobs[static_cast<std::size_t>(job)];
    j.finish[static_cast<std::size_t>(v)] = t;
    if (--left_[static_cast<std::size_t>(job)] == 0) j.completion = t;
    for (int s : dag_of(job).successors(v))
      if (--pending_[static_cast<std::size_t>(job)][static_cast<std::size_t>(s)] == 0) make_ready(job, s, t);
  }

  const TaskSet& ts_;
  ScheduleTrace& tr_;
  std::set<Key> ready_;
  std::vector<std::vector<Time>> remaining_;
  std::vector<std::vector<int>> pending_;
  std::vector<int> left_;
};

}  // namespace

ScheduleTrace simulate_jobs(const TaskSet& ts, std::vector<ScriptedJob> jobs) {
  if (ts.processors < 1) throw std::invalid_argument("processor count must be positive");
  std::stable_sort(jobs.begin(), jobs.end(), [](const ScriptedJob& a, const ScriptedJob& b) {
    return a.release != b.release ? a.release < b.release : a.task < b.task;
  });
  ScheduleTrace trace;
  trace.processors = ts.processors;
  std::vector<int> count(ts.tasks.size(), 0);
  for (const ScriptedJob& sj : jobs) {
    if (sj.task < 0 || static_cast<std::size_t>(sj.task) >= ts.tasks.size())
      throw std::invalid_argument("scripted job refers to an unknown task");
    const DagTask& task = ts.tasks[static_cast<std::size_t>(sj.task)];
    const Dag& g = task.dag();
    if (sj.exec.size() != g.size()) throw std::invalid_argument("scripted job has wrong execution vector size");
    for (std::size_t v = 0; v < g.size(); ++v)
      if (sj.exec[v] < 0 || sj.exec[v] > g.wcet(static_cast<int>(v)))
        throw std::invalid_argument("scripted execution time outside [0, wcet]");
    JobRecord j;
    j.task = sj.task;
    j.sequence = count[static_cast<std::size_t>(sj.task)]++;
    j.release = sj.release;
    j.deadline = sj.release + task.deadline();
    j.exec = sj.exec;
    j.ready.assign(g.size(), -1);
    j.finish.assign(g.size(), -1);
    trace.jobs.push_back(std::move(j));
  }
  Engine(ts, trace).run();
  return trace;
}

ScheduleTrace simulate(const TaskSet& ts, const SimConfig& config) {
  Time max_period = 0;
  for (const DagTask& t : ts.tasks) max_period = std::max(max_period, t.period());
  if (config.horizon < max_period) throw std::invalid_argument("simulation horizon is shorter than the largest period");
  std::mt19937_64 rng(config.seed);
  std::vector<ScriptedJob> jobs;
  for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
    const DagTask& task = ts.tasks[i];
    const Time T = task.period();
    const auto extra = static_cast<Time>(config.max_extra_gap * static_cast<double>(T));
    std::uniform_int_distribution<Time> gap(0, std::max<Time>(extra, 0));
    Time r = config.release == ReleasePolicy::Periodic ? 0 : gap(rng);
    while (r < config.horizon) {
      ScriptedJob j;
      j.task = static_cast<int>(i);
      j.release = r;
      for (Time c : task.dag().wcets())
        j.exec.push_back(config.exec == ExecPolicy::FullWcet ? c : std::uniform_int_distribution<Time>(0, c)(rng));
      jobs.push_back(std::move(j));
      r += T + (config.release == ReleasePolicy::Periodic ? 0 : gap(rng));
    }
  }
  return simulate_jobs(ts, std::move(jobs));
}

std::vector<int> extract_critical_chain(const ScheduleTrace& trace, const TaskSet& ts, int job) {
  const JobRecord& j = trace.jobs.at(static_cast<std::size_t>(job));
  if (!j.complete()) throw std::invalid_argument("job did not complete within the trace");
  const Dag& g = ts.tasks.at(static_cast<std::size_t>(j.task)).dag();
  if (g.size() == 0) return {};
  auto last_of = [&](const std::vector<int>& candidates) {
    int best = -1;
    for (int v : candidates) {
      const Time f = j.finish[static_cast<std::size_t>(v)];
      if (best < 0 || f > j.finish[static_cast<std::size_t>(best)] || (f == j.finish[static_cast<std::size_t>(best)] && v < best))
        best = v;
    }
    return best;
  };
  std::vector<int> all(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) all[v] = static_cast<int>(v);
  std::vector<int> chain{last_of(all)};
  while (!g.predecessors(chain.back()).empty()) chain.push_back(last_of(g.predecessors(chain.back())));
  std::reverse(chain.begin(), chain.end());
  return chain;
}

namespace {

using Interval = std::pair<Time, Time>;

std::vector<Interval> merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (iv.first >= iv.second) continue;
    if (!out.empty() && iv.first <= out.back().second) {
      out.back().second = std::max(out.back().second, iv.second);
    } else {
      out.push_back(iv);
    }
  }
  return out;
}

Time overlap(const std::vector<Interval>& set, Time a, Time b) {
  Time total = 0;
  for (const auto& [s, e] : set) {
    const Time lo = std::max(s, a);
    const Time hi = std::min(e, b);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

}  // namespace

Time critical_interference(const ScheduleTrace& trace, const TaskSet& ts, int job, const std::vector<int>& chain,
                           std::optional<int> by_task) {
  const JobRecord& j = trace.jobs.at(static_cast<std::size_t>(job));
  if (!j.complete()) throw std::invalid_argument("job did not complete within the trace");
  const Dag& g = ts.tasks.at(static_cast<std::size_t>(j.task)).dag();
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const int v = chain[i];
    if (v < 0 || static_cast<std::size_t>(v) >= g.size()) throw std::invalid_argument("chain/trace mismatch: bad subtask id");
    if (i == 0 && !g.predecessors(v).empty()) throw std::invalid_argument("chain/trace mismatch: chain must start at a source");
    if (i > 0) {
      const auto& pred = g.predecessors(v);
      if (std::find(pred.begin(), pred.end(), chain[i - 1]) == pred.end())
        throw std::invalid_argument("chain/trace mismatch: consecutive subtasks are not an edge");
    }
  }

  // Per chain subtask: ready window minus its own execution.
  std::vector<Interval> waiting;
  for (int v : chain) {
    std::vector<Interval> exec;
    for (const Segment& s : trace.segments)
      if (s.job == job && s.subtask == v) exec.emplace_back(s.start, s.end);
    exec = merge(std::move(exec));
    Time cursor = j.ready[static_cast<std::size_t>(v)];
    const Time end = j.finish[static_cast<std::size_t>(v)];
    for (const auto& [s, e] : exec) {
      if (s > cursor) waiting.emplace_back(cursor, s);
      cursor = std::max(cursor, e);
    }
    if (end > cursor) waiting.emplace_back(cursor, end);
  }
  waiting = merge(std::move(waiting));

  if (!by_task) {
    Time total = 0;
    for (const auto& [s, e] : waiting) total += e - s;
    return total;
  }
  Time total = 0;
  for (const Segment& s : trace.segments)
    if (s.task == *by_task) total += overlap(waiting, s.start, s.end);
  return total;
}

std::vector<std::string> audit_trace(const ScheduleTrace& trace, const TaskSet& ts) {
  std::vector<std::string> issues;
  const int m = trace.processors;
  auto report = [&](const std::string& s) {
    if (issues.size() < 50) issues.push_back(s);
  };

  // Processor exclusivity.
  std::vector<std::vector<Interval>> per_proc(static_cast<std::size_t>(m));
  for (const Segment& s : trace.segments) {
    if (s.processor < 0 || s.processor >= m) {
      report("segment on nonexistent processor");
      continue;
    }
    if (s.end <= s.start) report("empty or reversed segment");
    per_proc[static_cast<std::size_t>(s.processor)].emplace_back(s.start, s.end);
  }
  for (int p = 0; p < m; ++p) {
    auto& v = per_proc[static_cast<std::size_t>(p)];
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i].first < v[i - 1].second) report("processor " + std::to_string(p) + " runs two segments at once");
  }

  // Execution amounts, ready times, precedence.
  std::vector<std::vector<Time>> executed(trace.jobs.size());
  for (std::size_t k = 0; k < trace.jobs.size(); ++k) executed[k].assign(trace.jobs[k].exec.size(), 0);
  for (const Segment& s : trace.segments) {
    const JobRecord& j = trace.jobs.at(static_cast<std::size_t>(s.job));
    executed[static_cast<std::size_t>(s.job)][static_cast<std::size_t>(s.subtask)] += s.end - s.start;
    if (s.start < j.ready[static_cast<std::size_t>(s.subtask)]) report("subtask runs before its predecessors finish");
    if (s.end > j.finish[static_cast<std::size_t>(s.subtask)]) report("subtask runs after its recorded finish");
  }
  for (std::size_t k = 0; k < trace.jobs.size(); ++k) {
    const JobRecord& j = trace.jobs[k];
    const Dag& g = ts.tasks.at(static_cast<std::size_t>(j.task)).dag();
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (executed[k][v] != j.exec[v]) report("job " + std::to_string(k) + " subtask " + std::to_string(v) + " executed the wrong amount");
      Time ready = j.release;
      for (int p : g.predecessors(static_cast<int>(v))) ready = std::max(ready, j.finish[static_cast<std::size_t>(p)]);
      if (j.ready[v] != ready) report("job " + std::to_string(k) + " has an inconsistent ready time");
    }
  }

  // Work conservation and priority order, checked at every instant where the
  // state can change.
  std::vector<Time> instants;
  for (const Segment& s : trace.segments) {
    instants.push_back(s.start);
    instants.push_back(s.end);
  }
  for (const JobRecord& j : trace.jobs) {
    instants.insert(instants.end(), j.ready.begin(), j.ready.end());
    instants.push_back(j.release);
  }
  std::sort(instants.begin(), instants.end());
  instants.erase(std::unique(instants.begin(), instants.end()), instants.end());

  struct Item {
    Key key;
    Time ready, finish;
  };
  std::vector<Item> items;
  for (std::size_t k = 0; k < trace.jobs.size(); ++k) {
    const JobRecord& j = trace.jobs[k];
    for (std::size_t v = 0; v < j.exec.size(); ++v)
      if (j.exec[v] > 0) items.push_back({{j.task, j.release, static_cast<int>(k), static_cast<int>(v)}, j.ready[v], j.finish[v]});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.ready < b.ready; });
  std::vector<Segment> segs = trace.segments;  // sorted by start
  std::size_t next_item = 0, next_seg = 0;
  std::vector<Item> live;
  std::vector<Segment> running_segs;
  for (Time t : instants) {
    while (next_item < items.size() && items[next_item].ready <= t) live.push_back(items[next_item++]);
    std::erase_if(live, [&](const Item& it) { return it.finish <= t; });
    while (next_seg < segs.size() && segs[next_seg].start <= t) running_segs.push_back(segs[next_seg++]);
    std::erase_if(running_segs, [&](const Segment& s) { return s.end <= t; });
    std::vector<Key> running;
    for (const Segment& s : running_segs) running.push_back({s.task, trace.jobs[static_cast<std::size_t>(s.job)].release, s.job, s.subtask});
    std::optional<Key> worst_running;
    for (const Key& k : running)
      if (!worst_running || k > *worst_running) worst_running = k;
    for (const Item& it : live) {
      if (std::find(running.begin(), running.end(), it.key) != running.end()) continue;
      if (static_cast<int>(running.size()) < m) {
        report("ready subtask waits while a processor idles at t=" + std::to_string(t));
        break;
      }
      if (worst_running && it.key < *worst_running) {
        report("lower-priority work runs while a higher-priority subtask waits at t=" + std::to_string(t));
        break;
      }
    }
  }
  return issues;
}

std::string trace_jsonl(const ScheduleTrace& trace) {
  std::ostringstream os;
  for (const Segment& s : trace.segments) {
    os << "{\"task\":" << s.task << ",\"job\":" << s.job << ",\"subtask\":" << s.subtask << ",\"processor\":" << s.processor
       << ",\"start\":" << s.start << ",\"end\":" << s.end << "}\n";
  }
  return os.str();
}

}  // namespace dagrta
