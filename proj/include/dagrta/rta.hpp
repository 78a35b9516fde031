#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dagrta/carryout.hpp"
#include "dagrta/dag.hpp"

namespace dagrta {

enum class Method { DGA, MBB };

std::string to_string(Method m);
/// Accepts "dga"/"mbb" in any case; throws std::invalid_argument otherwise.
Method parse_method(const std::string& s);

/// W_i(delta) for interfering task i given its response bound r_i.
using WorkloadFn = std::function<Time(int i, Time delta, Time r_i)>;

struct FixedPointResult {
  std::optional<Time> bound;  // nullopt: exceeded the deadline
  int iterations = 0;
};

/// Seed L + ceil((C - L) / m).
Time response_seed(const DagTask& task, int processors);

/// Iterates R <- L + ceil((C - L + sum_{i<k} W_i(R)) / m) from the seed until
/// it stabilizes or passes the deadline.
FixedPointResult response_time_bound(int k, const TaskSet& ts, const std::vector<Time>& prior_bounds,
                                     const WorkloadFn& workload);

enum class FailureStage { None, Initialization, FixedPoint };

struct AnalysisReport {
  Method method = Method::DGA;
  int processors = 1;
  bool schedulable = true;
  std::vector<std::optional<Time>> bounds;  // per task; nullopt when exceeded or not reached
  std::vector<int> iterations;
  int failed_task = -1;
  FailureStage stage = FailureStage::None;
  // Run statistics; not part of the verdict.
  double seconds = 0.0;
  std::int64_t solves = 0;
  std::int64_t nodes = 0;

  /// Compares verdict, bounds and iteration counts (not statistics).
  bool same_result(const AnalysisReport& other) const;
};

struct AnalysisOptions {
  milp::SolveOptions solver;
};

/// Schedulability test: reject if any seed exceeds its deadline, otherwise
/// compute bounds in priority order and stop at the first that exceeds.
AnalysisReport schedulability_test(const TaskSet& ts, Method method, const AnalysisOptions& options = {});

/// DGA workload functions over a task set, with per-task carry-out memos and
/// carry-in tables built on first use.
class DgaWorkload {
 public:
  DgaWorkload(const TaskSet& ts, milp::SolveOptions options = {});
  Time operator()(int i, Time delta, Time r_i);
  std::int64_t solves() const;
  std::int64_t nodes() const;

 private:
  struct PerTask {
    std::unique_ptr<CarryOutBounder> bounder;
    std::vector<Time> ci_table;
  };
  PerTask& get(int i);

  const TaskSet* ts_;
  milp::SolveOptions options_;
  std::vector<PerTask> per_task_;
};

/// JSON document with per-task bounds and the verdict.
std::string report_json(const AnalysisReport& report, const TaskSet& ts, bool with_stats = false);
/// method,schedulable,n_tasks,failed_task,stage,bounds (';'-separated, "x" for exceeded)
std::string report_csv_row(const AnalysisReport& report);
std::string report_csv_header();

}  // namespace dagrta
