#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagrta {

/// All durations and instants are integer time units.
using Time = std::int64_t;

struct Edge {
  int from = 0;
  int to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class DagErrorKind { None, NegativeWcet, DanglingEdge, SelfLoop, DuplicateEdge, Cycle };

struct ValidationResult {
  DagErrorKind kind = DagErrorKind::None;
  std::string message;

  bool ok() const { return kind == DagErrorKind::None; }
};

class DagError : public std::runtime_error {
 public:
  DagError(DagErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  DagErrorKind kind() const { return kind_; }

 private:
  DagErrorKind kind_;
};

/// Thrown by enumerate_paths when the path count exceeds its cap.
class PathExplosionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Checks the rules a DAG must satisfy and reports the first violation.
/// Order of checks: wcets, endpoints, self-loops, duplicates, then acyclicity.
ValidationResult validate(std::span<const Time> wcets, std::span<const Edge> edges);

/// Immutable directed acyclic graph of subtasks. Construction validates and
/// throws DagError; every Dag object is therefore a valid DAG.
class Dag {
 public:
  Dag() = default;
  Dag(std::vector<Time> wcets, std::vector<Edge> edges);

  std::size_t size() const { return wcet_.size(); }
  Time wcet(int v) const { return wcet_[static_cast<std::size_t>(v)]; }
  const std::vector<Time>& wcets() const { return wcet_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& successors(int v) const { return succ_[static_cast<std::size_t>(v)]; }
  const std::vector<int>& predecessors(int v) const { return pred_[static_cast<std::size_t>(v)]; }

  /// Kahn order; among ready vertices the lowest id goes first.
  const std::vector<int>& topological_order() const { return topo_; }

  std::vector<int> sources() const;
  std::vector<int> sinks() const;

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.wcet_ == b.wcet_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Time> wcet_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> succ_;
  std::vector<std::vector<int>> pred_;
  std::vector<int> topo_;
};

/// Sum of subtask WCETs.
Time work(const Dag& dag);

/// Length of a longest path (longest-path DP over the topological order).
Time span(const Dag& dag);

/// Result of adding zero-WCET dummy source and sink vertices where needed.
struct NormalizedDag {
  Dag dag;
  int source = 0;
  int sink = 0;
  bool added_source = false;
  bool added_sink = false;
};

/// Appends a dummy source (id n) and/or dummy sink (next id) so the graph has
/// exactly one of each. Already single-source/single-sink DAGs are returned
/// unchanged.
NormalizedDag normalize_source_sink(const Dag& dag);

/// Start times of the unrestricted-processor ASAP schedule for the given
/// execution times: sources start at 0, every other vertex at the latest
/// finish among its predecessors. Throws std::invalid_argument when an
/// execution time is negative or exceeds the vertex WCET.
std::vector<Time> asap_start_times(const Dag& dag, std::span<const Time> exec_times);

/// ASAP start times with every vertex at its WCET.
std::vector<Time> asap_start_times(const Dag& dag);

inline constexpr std::size_t kDefaultPathCap = 100000;

/// Number of source-to-v paths, saturating at `cap + 1`.
std::size_t count_paths(const Dag& dag, int v, std::size_t cap = kDefaultPathCap);

/// All paths from a source vertex to v (each path lists vertex ids from the
/// source to v). Throws PathExplosionError when more than `cap` paths exist.
std::vector<std::vector<int>> enumerate_paths(const Dag& dag, int v,
                                              std::size_t cap = kDefaultPathCap);

/// Size of a maximum antichain among vertices with positive WCET (Dilworth).
/// Bounds how many subtasks of one job can execute at the same instant.
int max_parallelism(const Dag& dag);

/// A sporadic DAG task with constrained deadline. The span-vs-deadline relation
/// is not enforced here: an infeasible task (span > deadline) is representable
/// and is rejected by the schedulability test.
class DagTask {
 public:
  DagTask() = default;
  DagTask(Dag dag, Time deadline, Time period);

  const Dag& dag() const { return dag_; }
  Time deadline() const { return deadline_; }
  Time period() const { return period_; }
  Time work() const { return work_; }
  Time span() const { return span_; }

  double utilization() const { return static_cast<double>(work_) / static_cast<double>(period_); }
  bool constrained_deadline() const { return span_ <= deadline_ && deadline_ <= period_; }

  friend bool operator==(const DagTask& a, const DagTask& b) {
    return a.dag_ == b.dag_ && a.deadline_ == b.deadline_ && a.period_ == b.period_;
  }

 private:
  Dag dag_;
  Time deadline_ = 1;
  Time period_ = 1;
  Time work_ = 0;
  Time span_ = 0;
};

/// Tasks in decreasing priority order: tasks[i] has higher priority than
/// tasks[k] iff i < k.
struct TaskSet {
  std::vector<DagTask> tasks;
  int processors = 1;

  double total_utilization() const;

  friend bool operator==(const TaskSet&, const TaskSet&) = default;
};

}  // namespace dagrta
