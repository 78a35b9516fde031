#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dagrta/dag.hpp"
#include "dagrta/milp.hpp"

namespace dagrta {

/// How start-time lower bounds are written into the carry-out model.
enum class Formulation {
  /// S_source = 0 and S_a >= S_b + X_b for every edge (b, a). Polynomial size.
  EdgeRecursive,
  /// S_a >= sum of X over each source-to-a path (excluding a). Exponential in
  /// general; guarded by the path-count cap.
  PathEnumerated,
  /// Same optimum, tighter relaxation. Only vertices that start inside the
  /// window carry information, and that set is closed under predecessors, so
  /// A_a <= A_b per edge (b, a), S_a ranges over [0, delta], edge rows relax
  /// to S_a >= S_b + X_b - C_b (1 - A_a), and the headroom M_a is folded into
  /// W_a <= min(C_a, delta) A_a and W_a + S_a <= delta. No M variables.
  Windowed,
};

/// Integer program whose optimum bounds the workload a single job of a DAG
/// task can execute in the first `delta` time units after its release, when
/// each subtask starts as soon as its predecessors finish and may run for any
/// integer time up to its WCET.
///
/// Per vertex a the model holds X_a (execution time), W_a (workload inside the
/// window), S_a (start time), M_a (headroom max(delta - S_a, 0)) and binary A_a.
/// The headroom product constraint M_a <= (delta - S_a) A_a is linearized as
///   M_a <= delta A_a   and   M_a + S_a + big_a A_a <= delta + big_a
/// with big_a = max(0, Sasap_a - delta), where Sasap_a is the full-WCET ASAP
/// start of a and also the upper bound of S_a.
struct CarryOutModel {
  milp::Model model;
  NormalizedDag graph;
  Time delta = 0;
  Formulation formulation = Formulation::EdgeRecursive;
  std::vector<int> x, w, s, m, a;  // variable index per vertex of graph.dag (m is -1 when absent)
  std::vector<Time> latest_start;  // upper bound of S per vertex
};

CarryOutModel build_carryout_model(const Dag& dag, Time delta_co,
                                   Formulation formulation = Formulation::EdgeRecursive,
                                   std::size_t path_cap = kDefaultPathCap);

struct VertexAssignment {
  Time x = 0, w = 0, s = 0, m = 0;
  int a = 0;
};

struct CarryOutSolution {
  Time objective = 0;
  std::vector<VertexAssignment> assignment;  // indexed like graph.dag
  milp::SolveStats stats;
};

/// Provably optimal solution of the model by exact branch and bound. A
/// heuristic schedule seeds the incumbent.
CarryOutSolution solve_exact(const CarryOutModel& model, const milp::SolveOptions& options = {});

/// Feasible model point derived from concrete execution times.
std::vector<std::int64_t> point_from_exec_times(const CarryOutModel& model,
                                                std::span<const Time> exec_times);

/// Workload that the ASAP unrestricted-processor schedule with the given
/// execution times places in [0, delta).
Time asap_window_workload(const Dag& dag, std::span<const Time> exec_times, Time delta);

/// Exhaustive search over every integer execution-time vector. Throws
/// std::length_error when the number of vectors exceeds `guard`.
Time brute_force_oracle(const Dag& dag, Time delta_co, std::int64_t guard = 1'000'000);

/// Best window workload found by a cheap local search over execution times
/// (full WCETs, then single-vertex zero/full flips). A lower bound on the
/// model optimum.
Time heuristic_carryout(const Dag& dag, Time delta_co, std::vector<Time>* exec_out = nullptr);

/// Carry-out bound min{OBJ, m * delta} for one task, memoized per window
/// length. Safe to share between threads.
class CarryOutBounder {
 public:
  explicit CarryOutBounder(const DagTask& task, milp::SolveOptions options = {});

  /// Optimum of the carry-out model for this window length.
  Time objective(Time delta_co);
  /// min{objective, m * delta_co}.
  Time bound(Time delta_co, int processors);

  /// Cached optimum, if already known.
  std::optional<Time> known(Time delta_co) const;
  /// Cheap upper bound on the optimum from structure and cached neighbours:
  /// the optimum is non-decreasing in the window and grows by at most the
  /// task's maximum parallelism per time unit.
  Time upper_bound(Time delta_co) const;

  std::int64_t solves() const;
  std::int64_t nodes() const;
  Time span() const { return span_; }
  Time work() const { return work_; }
  int parallelism() const { return width_; }

 private:
  Time solve_from(Time delta_co, Time lower, const std::vector<Time>& exec);

  const Dag* dag_;
  milp::SolveOptions options_;
  Time work_ = 0;
  Time span_ = 0;
  int width_ = 1;
  mutable std::mutex mu_;
  std::map<Time, Time> memo_;
  std::int64_t solves_ = 0;
  std::int64_t nodes_ = 0;
};

/// Uncached convenience form of CarryOutBounder::bound.
Time carry_out_bound(const DagTask& task, Time delta_co, int processors);

/// Text export of the model.
enum class ModelFormat { Lp, Mps };
std::string export_model(const CarryOutModel& model, ModelFormat format);

}  // namespace dagrta
