#include <gtest/gtest.h>

#include <json.hpp>

#include "dagrta/rta.hpp"
#include "dagrta/sim.hpp"
#include "dagrta/taskgen.hpp"
#include "dagrta/workload.hpp"
#include "fixtures.hpp"

using namespace dagrta;

namespace {

TaskSet two_task_set() {
  TaskSet ts;
  ts.processors = 1;
  ts.tasks.emplace_back(Dag({4}, {}), 10, 10);
  ts.tasks.emplace_back(fixtures::chain({3, 3}), 20, 20);
  return ts;
}

// Interference of the single-vertex high-priority task (C = L = 4, T = 10,
// R = 4) on one processor, evaluated by hand over all splits. Its carry-in
// and carry-out bounds of length len are both min(len, 4).
Time high_workload(Time delta) {
  const Time C = 4, L = 4, T = 10, R = 4;
  const Time y = delta - L + R;
  auto pair = [&](Time g) {
    Time best = 0;
    for (Time ci = 0; ci <= g; ++ci) best = std::max(best, std::min({C, ci}) + std::min({C, g - ci}));
    return best;
  };
  if (y < T) return std::min(delta, std::max(std::min(C, delta), delta + R - T >= 0 ? pair(delta + R - T) : 0));
  const Time body = std::max<Time>((y / T - 1) * C, 0);
  return std::min(delta, body + pair(L + y % T));
}

}  // namespace

TEST(Rta, SeedForHighestPriority) {
  TaskSet ts;
  ts.processors = 2;
  ts.tasks.emplace_back(fixtures::reconstruction_dag(), 20, 20);
  EXPECT_EQ(response_seed(ts.tasks[0], 2), 11);
  const auto r = schedulability_test(ts, Method::DGA);
  ASSERT_TRUE(r.schedulable);
  EXPECT_EQ(r.bounds[0], Time{11});
}

TEST(Rta, SequentialTaskAlone) {
  TaskSet ts;
  ts.processors = 4;
  ts.tasks.emplace_back(fixtures::chain({2, 3, 4}), 9, 12);
  for (Method m : {Method::DGA, Method::MBB}) {
    const auto r = schedulability_test(ts, m);
    ASSERT_TRUE(r.schedulable);
    EXPECT_EQ(r.bounds[0], Time{9});
  }
}

TEST(Rta, TwoTaskFixedPointByHand) {
  const TaskSet ts = two_task_set();
  // seed 6; then R <- 6 + W(R)
  Time r = 6;
  for (;;) {
    const Time next = 6 + high_workload(r);
    if (next <= r) break;
    r = next;
  }
  EXPECT_EQ(r, 10);
  const auto dga = schedulability_test(ts, Method::DGA);
  ASSERT_TRUE(dga.schedulable);
  EXPECT_EQ(dga.bounds[0], Time{4});
  EXPECT_EQ(dga.bounds[1], r);

  // Synchronous periodic release reaches the bound.
  SimConfig cfg;
  cfg.horizon = 40;
  const auto trace = simulate(ts, cfg);
  Time worst = 0;
  for (const auto& j : trace.jobs)
    if (j.task == 1) worst = std::max(worst, j.response());
  EXPECT_EQ(worst, 10);
}

TEST(Rta, SpanAboveDeadlineFailsAtInitialization) {
  TaskSet ts;
  ts.processors = 4;
  ts.tasks.emplace_back(Dag({1}, {}), 5, 5);
  ts.tasks.emplace_back(fixtures::chain({4, 4}), 6, 10);
  for (Method m : {Method::DGA, Method::MBB}) {
    const auto r = schedulability_test(ts, m);
    EXPECT_FALSE(r.schedulable);
    EXPECT_EQ(r.stage, FailureStage::Initialization);
    EXPECT_EQ(r.failed_task, 1);
  }
}

TEST(Rta, SingleTaskWithinSeedIsSchedulable) {
  TaskSet ts;
  ts.processors = 2;
  ts.tasks.emplace_back(fixtures::reconstruction_dag(), 11, 30);
  EXPECT_TRUE(schedulability_test(ts, Method::DGA).schedulable);
  ts.tasks[0] = DagTask(fixtures::reconstruction_dag(), 10, 30);
  EXPECT_FALSE(schedulability_test(ts, Method::DGA).schedulable);
}

TEST(Rta, EmptySetIsSchedulable) {
  TaskSet ts;
  ts.processors = 3;
  EXPECT_TRUE(schedulability_test(ts, Method::DGA).schedulable);
}

TEST(Rta, IteratesAreNonDecreasing) {
  const TaskSet ts = two_task_set();
  std::vector<Time> queried;
  const WorkloadFn fn = [&](int i, Time delta, Time r_i) {
    queried.push_back(delta);
    return melani_workload(ts.tasks[static_cast<std::size_t>(i)], delta, r_i, ts.processors);
  };
  const auto fp = response_time_bound(1, ts, {4, 0}, fn);
  ASSERT_TRUE(fp.bound);
  EXPECT_TRUE(std::is_sorted(queried.begin(), queried.end()));
  EXPECT_LE(fp.iterations, ts.tasks[1].deadline() - response_seed(ts.tasks[1], 1) + 1);
}

TEST(Rta, ReportFormats) {
  const TaskSet ts = two_task_set();
  const auto r = schedulability_test(ts, Method::DGA);
  EXPECT_EQ(report_csv_header(), "method,schedulable,n_tasks,failed_task,stage,bounds");
  EXPECT_EQ(report_csv_row(r), "DGA,1,2,-1,none,4;10");
  const auto j = nlohmann::json::parse(report_json(r, ts));
  EXPECT_EQ(j["schedulable"], true);
  EXPECT_EQ(j["tasks"][1]["response_bound"], 10);
  EXPECT_EQ(parse_method("Mbb"), Method::MBB);
  EXPECT_THROW(parse_method("x"), std::invalid_argument);
}

TEST(RtaProperty, RandomSets) {
  GenConfig cfg;
  cfg.n_min = 3;
  cfg.n_max = 8;
  cfg.beta = 0.2;
  for (int s = 0; s < 60; ++s) {
    Rng rng(derive_seed(99, static_cast<std::uint64_t>(s)));
    const int m = 2 + s % 6;
    const TaskSet ts = assign_priorities_dm(gen_taskset(0.2 * m + 0.1 * (s % 4), m, cfg, rng));
    const auto dga = schedulability_test(ts, Method::DGA);
    const auto mbb = schedulability_test(ts, Method::MBB);
    EXPECT_TRUE(dga.same_result(schedulability_test(ts, Method::DGA)));
    if (mbb.schedulable) {
      EXPECT_TRUE(dga.schedulable) << "set " << s;
    }
    for (std::size_t k = 0; k < ts.tasks.size(); ++k) {
      if (dga.bounds[k]) {
        EXPECT_GE(*dga.bounds[k], response_seed(ts.tasks[k], m));
        EXPECT_LE(*dga.bounds[k], ts.tasks[k].deadline());
        EXPECT_LE(dga.iterations[k], ts.tasks[k].deadline() - response_seed(ts.tasks[k], m) + 1);
      }
      if (dga.bounds[k] && mbb.bounds[k]) {
        EXPECT_LE(*dga.bounds[k], *mbb.bounds[k]) << "set " << s << " task " << k;
      }
    }
    bool all = true;
    for (const auto& b : dga.bounds) all = all && b.has_value();
    EXPECT_EQ(all, dga.schedulable);
  }
}
