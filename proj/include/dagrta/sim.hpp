#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dagrta/dag.hpp"

namespace dagrta {

struct Segment {
  int task = 0;
  int job = 0;  // index into ScheduleTrace::jobs
  int subtask = 0;
  int processor = 0;
  Time start = 0;
  Time end = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct JobRecord {
  int task = 0;
  int sequence = 0;  // n-th job of its task
  Time release = 0;
  Time deadline = 0;  // absolute
  std::vector<Time> exec;
  std::vector<Time> ready;   // all predecessors finished (release for sources)
  std::vector<Time> finish;  // -1 until complete
  Time completion = -1;

  bool complete() const { return completion >= 0; }
  Time response() const { return completion - release; }
};

struct ScheduleTrace {
  int processors = 1;
  std::vector<JobRecord> jobs;
  std::vector<Segment> segments;  // ordered by start time, then processor
};

enum class ReleasePolicy { Periodic, SporadicRandom };
enum class ExecPolicy { FullWcet, UniformRandom };

struct SimConfig {
  Time horizon = 0;  // jobs are released in [0, horizon); all of them run to completion
  ReleasePolicy release = ReleasePolicy::Periodic;
  ExecPolicy exec = ExecPolicy::FullWcet;
  std::uint64_t seed = 1;
  /// Sporadic inter-arrival is T plus a uniform draw in [0, max_extra_gap * T].
  double max_extra_gap = 0.5;
};

/// A job with prescribed release and execution times.
struct ScriptedJob {
  int task = 0;
  Time release = 0;
  std::vector<Time> exec;
};

/// Preemptive global fixed-priority simulation. At each event the m
/// highest-priority ready subtasks run; priority is (task index, job release,
/// subtask id). Running subtasks keep their processor when they stay selected.
ScheduleTrace simulate(const TaskSet& ts, const SimConfig& config);
ScheduleTrace simulate_jobs(const TaskSet& ts, std::vector<ScriptedJob> jobs);

/// Subtask ids from a source to a last-completing subtask, each step following
/// a last-completing predecessor (lowest id on ties).
std::vector<int> extract_critical_chain(const ScheduleTrace& trace, const TaskSet& ts, int job);

/// Without `by_task`: total time in which a chain subtask is ready but not
/// executing. With `by_task`: processor time task `by_task` spends during
/// those instants.
Time critical_interference(const ScheduleTrace& trace, const TaskSet& ts, int job,
                           const std::vector<int>& chain, std::optional<int> by_task = std::nullopt);

/// Checks processor exclusivity, precedence, execution amounts, and that no
/// ready subtask waits while a processor idles or runs lower-priority work.
/// Returns human-readable violations (empty when the trace is valid).
std::vector<std::string> audit_trace(const ScheduleTrace& trace, const TaskSet& ts);

/// One JSON object per segment, newline separated.
std::string trace_jsonl(const ScheduleTrace& trace);

}  // namespace dagrta
