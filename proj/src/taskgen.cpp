#include "dagrta/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dagrta {

void GenConfig::validate() const {
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge_prob must be in (0, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in (0, 1]");
  if (n_min < 1 || n_max < n_min) throw std::invalid_argument("n range must be non-empty with n_min >= 1");
  if (wcet_min < 1 || wcet_max < wcet_min)
    throw std::invalid_argument("wcet range must be non-empty with wcet_min >= 1");
  if (!(util_tolerance > 0.0)) throw std::invalid_argument("util_tolerance must be positive");
}

namespace {

int find(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

Time draw_deadline(Time L, Time T, Rng& rng) {
  if (T <= L) return L;
  std::normal_distribution<double> dist(static_cast<double>(T + L) / 2.0, static_cast<double>(T - L) / 4.0);
  for (;;) {
    const auto d = static_cast<Time>(std::llround(dist(rng)));
    if (d >= L && d <= T) return d;
  }
}

}  // namespace

Dag gen_dag(const GenConfig& config, Rng& rng) {
  const int n = std::uniform_int_distribution<int>(config.n_min, config.n_max)(rng);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<Edge> edges;
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::bernoulli_distribution coin(config.edge_prob);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!coin(rng)) continue;
      const int a = order[static_cast<std::size_t>(i)];
      const int b = order[static_cast<std::size_t>(j)];
      edges.push_back({a, b});
      parent[static_cast<std::size_t>(find(parent, a))] = find(parent, b);
    }
  }
  // Walk the ordering keeping the prefix connected: a vertex outside the
  // prefix's component is the earliest of its own component, so a forward
  // edge from its immediate predecessor in the ordering merges the two.
  for (int pos = 1; pos < n; ++pos) {
    const int v = order[static_cast<std::size_t>(pos)];
    const int u = order[static_cast<std::size_t>(pos - 1)];
    const int rv = find(parent, v);
    const int ru = find(parent, u);
    if (rv == ru) continue;
    edges.push_back({u, v});
    parent[static_cast<std::size_t>(rv)] = ru;
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& x, const Edge& y) { return x.from != y.from ? x.from < y.from : x.to < y.to; });

  std::uniform_int_distribution<Time> wcet(config.wcet_min, config.wcet_max);
  std::vector<Time> wcets(static_cast<std::size_t>(n));
  for (auto& c : wcets) c = wcet(rng);
  return Dag(std::move(wcets), std::move(edges));
}

DagTask gen_task(const Dag& dag, const GenConfig& config, Rng& rng) {
  const Time C = work(dag);
  const Time L = span(dag);
  const double ratio = static_cast<double>(C) / static_cast<double>(L);
  double u = ratio;
  if (ratio >= config.beta) u = std::uniform_real_distribution<double>(config.beta, ratio)(rng);
  Time T = static_cast<Time>(std::llround(static_cast<double>(C) / u));
  T = std::max({T, L, Time{1}});
  const Time D = draw_deadline(L, T, rng);
  return DagTask(dag, D, T);
}

TaskSet gen_taskset(double total_util, int processors, const GenConfig& config, Rng& rng) {
  if (!(total_util > 0.0)) throw std::invalid_argument("total utilization must be positive");
  config.validate();
  TaskSet ts;
  ts.processors = processors;
  double total = 0.0;
  const double tol = config.util_tolerance * total_util;
  constexpr int kMaxTries = 10000;
  for (int tries = 0; tries < kMaxTries; ++tries) {
    const Dag dag = gen_dag(config, rng);
    DagTask task = gen_task(dag, config, rng);
    const double u = task.utilization();
    if (std::abs(total + u - total_util) <= tol) {
      ts.tasks.push_back(std::move(task));
      return ts;
    }
    if (total + u < total_util) {
      ts.tasks.push_back(std::move(task));
      total += u;
      continue;
    }
    // Stretch the period so this task fills exactly the remaining share.
    const double needed = total_util - total;
    const Time T = std::max<Time>(std::llround(static_cast<double>(task.work()) / needed), task.span());
    const double adjusted = static_cast<double>(task.work()) / static_cast<double>(T);
    if (std::abs(total + adjusted - total_util) > tol) continue;  // rounding too coarse; draw another
    const Time D = draw_deadline(task.span(), T, rng);
    ts.tasks.emplace_back(task.dag(), D, T);
    return ts;
  }
  throw std::runtime_error("could not reach the requested utilization within tolerance");
}

TaskSet assign_priorities_dm(TaskSet ts) {
  std::stable_sort(ts.tasks.begin(), ts.tasks.end(),
                   [](const DagTask& a, const DagTask& b) { return a.deadline() < b.deadline(); });
  return ts;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over master + index
  std::uint64_t z = master + index + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dagrta
