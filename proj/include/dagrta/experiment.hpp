#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dagrta/rta.hpp"
#include "dagrta/taskgen.hpp"

namespace dagrta {

enum class SweepVariable { Utilization, Processors };

struct ExperimentSpec {
  SweepVariable sweep = SweepVariable::Utilization;
  /// Total utilizations (Utilization sweep) or processor counts (Processors sweep).
  std::vector<double> points;
  /// Fixed m for a Utilization sweep.
  int processors = 16;
  /// U = normalized_util * m for a Processors sweep.
  double normalized_util = 0.5;
  GenConfig gen;
  int sets_per_point = 100;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::DGA, Method::MBB};
  int threads = 1;
  /// When false, mean_ms is written as NA so the CSV is reproducible.
  bool timing = false;
  milp::SolveOptions solver;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

/// Desk-scale defaults: n in [5, 10], 100 sets per point.
ExperimentSpec desk_spec();
/// Full-scale generation: n in [10, 20], 500 sets per point.
ExperimentSpec full_spec();

struct ExperimentRow {
  double point = 0.0;
  Method method = Method::DGA;
  int schedulable = 0;
  int n_sets = 0;  // sets analyzed without a solver error
  int warnings = 0;
  double mean_ms = 0.0;

  double ratio() const { return n_sets > 0 ? static_cast<double>(schedulable) / n_sets : 0.0; }
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;  // point-major, methods in spec order
  bool timing = false;
  /// Tasks whose DGA bound exceeds their MBB bound, and sets MBB accepts but
  /// DGA rejects (only counted when both methods run).
  std::int64_t bound_violations = 0;
  std::int64_t verdict_violations = 0;
};

/// The task set analyzed as set `index` of grid point `point_index`.
TaskSet experiment_taskset(const ExperimentSpec& spec, std::size_t point_index, int index);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// point,method,ratio,n_sets,warnings,mean_ms
std::string experiment_csv_header();
std::string experiment_csv(const ExperimentResult& result);

/// Points where the DGA ratio is below the MBB ratio.
std::vector<double> dominance_failures(const ExperimentResult& result);

}  // namespace dagrta
