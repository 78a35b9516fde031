#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dagrta/carryout.hpp"
#include "dagrta/dag.hpp"

namespace dagrta {

/// Carry-in and carry-out window lengths inside one problem window.
struct WindowSplit {
  Time ci_len = 0;
  Time co_len = 0;

  friend bool operator==(const WindowSplit&, const WindowSplit&) = default;
};

/// Workload of the jobs released strictly inside the window (neither carry-in
/// nor carry-out): max{(floor((delta - L + R) / T) - 1) C, 0}.
Time body_workload(const DagTask& task, Time delta, Time r_i);

/// Work the full-WCET ASAP schedule executes in its last `ci_len` time units.
Time carry_in_workload(const DagTask& task, Time ci_len);

/// carry_in_workload for every length 0..span.
std::vector<Time> carry_in_table(const DagTask& task);

/// Baseline bound assuming the whole job can spread over all m processors.
/// Exact integer evaluation of the rational expression.
Time melani_workload(const DagTask& task, Time delta, Time r_i, int processors);

/// Gamma = L + (delta - L + R) mod T; nullopt when delta - L + R < 0.
std::optional<Time> window_total(const DagTask& task, Time delta, Time r_i);

/// Splits visited by the window-sliding procedure, in order. Empty when
/// delta - L + R < 0.
std::vector<WindowSplit> window_splits(const DagTask& task, Time delta, Time r_i);

/// Supplies the carry-out bound min{OBJ, m * len} for one interfering task.
class CarryOutSource {
 public:
  virtual ~CarryOutSource() = default;
  virtual Time bound(Time co_len) = 0;
  /// Value available without any solve, if any.
  virtual std::optional<Time> known(Time co_len) { return bound(co_len); }
  /// Cheap upper bound on bound(co_len).
  virtual Time upper_bound(Time co_len) { return bound(co_len); }
};

/// Adapts a plain function (test stubs, closed forms).
class FunctionCarryOut final : public CarryOutSource {
 public:
  explicit FunctionCarryOut(std::function<Time(Time)> fn) : fn_(std::move(fn)) {}
  Time bound(Time co_len) override { return fn_(co_len); }

 private:
  std::function<Time(Time)> fn_;
};

/// Exact carry-out bounds from a memoizing solver front end.
class SolverCarryOut final : public CarryOutSource {
 public:
  SolverCarryOut(CarryOutBounder& bounder, int processors) : b_(&bounder), m_(processors) {}
  Time bound(Time co_len) override { return b_->bound(co_len, m_); }
  std::optional<Time> known(Time co_len) override;
  Time upper_bound(Time co_len) override;

 private:
  CarryOutBounder* b_;
  int m_;
};

/// Which numbers of interfering jobs the bound considers.
enum class WindowRule {
  /// Every job count that fits: one job alone contributes at most
  /// min{C, m delta}; k + 1 >= 2 jobs leave (k - 1) C for the body jobs and
  /// ci + co = delta + R - k T for the two outer jobs.
  AllJobCounts,
  /// Only k = floor((delta - L + R) / T), i.e. Gamma = L + (delta - L + R) mod T.
  /// With no complete period (k = 0) the carry-in and carry-out windows then
  /// belong to the same job.
  Literal,
};

/// Bound on the workload of an interfering task in any window of length delta:
/// body workload plus the best carry-in/carry-out split of the remaining
/// window, each side capped at min{C, m * len}, all capped at m * delta.
/// Every integer split is considered; carry-out values are requested lazily,
/// best upper bound first, and skipped once they cannot beat the running
/// maximum. `ci_table` (from carry_in_table) is optional.
Time interfering_workload(const DagTask& task, Time delta, Time r_i, int processors,
                          CarryOutSource& carry_out, const std::vector<Time>* ci_table = nullptr,
                          WindowRule rule = WindowRule::AllJobCounts);

/// Best carry-in plus carry-out value over all integer splits ci + co = gamma,
/// each side capped at min{C, m * len}.
Time best_split_workload(const DagTask& task, Time gamma, int processors, CarryOutSource& carry_out,
                         const std::vector<Time>& ci_table);

}  // namespace dagrta
