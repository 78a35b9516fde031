#pragma once

#include <cstdint>
#include <random>

#include "dagrta/dag.hpp"

namespace dagrta {

using Rng = std::mt19937_64;

struct GenConfig {
  double edge_prob = 0.2;
  int n_min = 10;
  int n_max = 20;
  Time wcet_min = 1;
  Time wcet_max = 100;
  double beta = 0.1;
  /// Relative tolerance on the total utilization of a generated set.
  double util_tolerance = 1e-3;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

/// Random-order G(n, p) DAG made weakly connected with the fewest extra edges.
Dag gen_dag(const GenConfig& config, Rng& rng);

/// Draws utilization, period and deadline for a DAG.
DagTask gen_task(const Dag& dag, const GenConfig& config, Rng& rng);

/// Adds tasks until the utilization reaches `total_util`; the last task's
/// period is stretched so the sum matches within the configured tolerance.
/// Tasks keep generation order (apply assign_priorities_dm afterwards).
TaskSet gen_taskset(double total_util, int processors, const GenConfig& config, Rng& rng);

/// Stable sort by relative deadline.
TaskSet assign_priorities_dm(TaskSet ts);

/// Seed for the index-th task set derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace dagrta
