#include <gtest/gtest.h>

#include <sstream>

#include "dagrta/experiment.hpp"

using namespace dagrta;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s = desk_spec();
  s.points = {1, 2, 3};
  s.processors = 4;
  s.sets_per_point = 6;
  s.seed = 11;
  s.gen.beta = 0.2;
  return s;
}

}  // namespace

TEST(Experiment, CsvShape) {
  const auto res = run_experiment(small_spec());
  const std::string csv = experiment_csv(res);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "point,method,ratio,n_sets,warnings,mean_ms");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_NE(line.find(",NA"), std::string::npos);
  }
  EXPECT_EQ(rows, 6);
  for (const auto& r : res.rows) {
    EXPECT_GE(r.ratio(), 0.0);
    EXPECT_LE(r.ratio(), 1.0);
    EXPECT_EQ(r.n_sets + r.warnings, 6);
  }
  EXPECT_TRUE(dominance_failures(res).empty());
  EXPECT_EQ(res.bound_violations, 0);
  EXPECT_EQ(res.verdict_violations, 0);
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  ExperimentSpec a = small_spec();
  ExperimentSpec b = small_spec();
  b.threads = 4;
  EXPECT_EQ(experiment_csv(run_experiment(a)), experiment_csv(run_experiment(b)));
  a.sets_per_point = 1;
  EXPECT_EQ(experiment_csv(run_experiment(a)), experiment_csv(run_experiment(a)));
}

TEST(Experiment, ProcessorSweep) {
  ExperimentSpec s = desk_spec();
  s.sweep = SweepVariable::Processors;
  s.points = {2, 4};
  s.normalized_util = 0.5;
  s.sets_per_point = 3;
  const auto res = run_experiment(s);
  ASSERT_EQ(res.rows.size(), 4u);
  EXPECT_EQ(experiment_taskset(s, 1, 0).processors, 4);
  EXPECT_NEAR(experiment_taskset(s, 1, 0).total_utilization(), 2.0, 2.0 * 1e-3);
}

TEST(Experiment, TimingColumn) {
  ExperimentSpec s = small_spec();
  s.timing = true;
  s.points = {1};
  const std::string csv = experiment_csv(run_experiment(s));
  EXPECT_EQ(csv.find(",NA"), std::string::npos);
}

TEST(Experiment, ResourceErrorsBecomeWarnings) {
  ExperimentSpec s = small_spec();
  s.points = {2};
  s.methods = {Method::DGA};
  s.solver.max_nodes = 0;
  const auto res = run_experiment(s);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_EQ(res.rows[0].n_sets + res.rows[0].warnings, 6);
}

TEST(Experiment, InvalidSpecs) {
  ExperimentSpec s = small_spec();
  s.points.clear();
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small_spec();
  s.sets_per_point = 0;
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
  s = small_spec();
  s.sweep = SweepVariable::Processors;
  s.points = {2.5};
  EXPECT_THROW(run_experiment(s), std::invalid_argument);
}
