#include "dagrta/dag.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

namespace dagrta {

namespace {

// Kahn's algorithm with a min-heap so the order is deterministic. Returns
// fewer than n vertices when the graph has a cycle.
std::vector<int> kahn_order(std::size_t n, const std::vector<std::vector<int>>& succ) {
  std::vector<int> indeg(n, 0);
  for (const auto& out : succ)
    for (int w : out) ++indeg[static_cast<std::size_t>(w)];
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push(static_cast<int>(v));
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : succ[static_cast<std::size_t>(v)])
      if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push(w);
  }
  return order;
}

}  // namespace

ValidationResult validate(std::span<const Time> wcets, std::span<const Edge> edges) {
  const auto n = static_cast<int>(wcets.size());
  for (int v = 0; v < n; ++v) {
    if (wcets[static_cast<std::size_t>(v)] < 0)
      return {DagErrorKind::NegativeWcet, "vertex " + std::to_string(v) + " has negative wcet"};
  }
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      return {DagErrorKind::DanglingEdge, "edge (" + std::to_string(e.from) + "," +
                                              std::to_string(e.to) +
                                              ") references a vertex outside 0.." +
                                              std::to_string(n - 1)};
  }
  for (const Edge& e : edges) {
    if (e.from == e.to)
      return {DagErrorKind::SelfLoop, "self-loop on vertex " + std::to_string(e.from)};
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : edges) {
    if (!seen.emplace(e.from, e.to).second)
      return {DagErrorKind::DuplicateEdge, "duplicate edge (" + std::to_string(e.from) + "," +
                                               std::to_string(e.to) + ")"};
  }
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
  for (const Edge& e : edges) succ[static_cast<std::size_t>(e.from)].push_back(e.to);
  if (kahn_order(static_cast<std::size_t>(n), succ).size() != static_cast<std::size_t>(n))
    return {DagErrorKind::Cycle, "graph contains a cycle"};
  return {};
}

Dag::Dag(std::vector<Time> wcets, std::vector<Edge> edges)
    : wcet_(std::move(wcets)), edges_(std::move(edges)) {
  if (auto r = validate(wcet_, edges_); !r.ok()) throw DagError(r.kind, r.message);
  succ_.assign(wcet_.size(), {});
  pred_.assign(wcet_.size(), {});
  for (const Edge& e : edges_) {
    succ_[static_cast<std::size_t>(e.from)].push_back(e.to);
    pred_[static_cast<std::size_t>(e.to)].push_back(e.from);
  }
  for (auto& s : succ_) std::sort(s.begin(), s.end());
  for (auto& p : pred_) std::sort(p.begin(), p.end());
  topo_ = kahn_order(wcet_.size(), succ_);
}

std::vector<int> Dag::sources() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (pred_[v].empty()) out.push_back(static_cast<int>(v));
  return out;
}

std::vector<int> Dag::sinks() const {
  std::vector<int> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (succ_[v].empty()) out.push_back(static_cast<int>(v));
  return out;
}

Time work(const Dag& dag) {
  return std::accumulate(dag.wcets().begin(), dag.wcets().end(), Time{0});
}

Time span(const Dag& dag) {
  std::vector<Time> finish(dag.size(), 0);
  Time best = 0;
  for (int v : dag.topological_order()) {
    Time start = 0;
    for (int p : dag.predecessors(v)) start = std::max(start, finish[static_cast<std::size_t>(p)]);
    finish[static_cast<std::size_t>(v)] = start + dag.wcet(v);
    best = std::max(best, finish[static_cast<std::size_t>(v)]);
  }
  return best;
}

NormalizedDag normalize_source_sink(const Dag& dag) {
  auto srcs = dag.sources();
  auto snks = dag.sinks();
  NormalizedDag out;
  if (dag.size() == 0) {
    out.dag = Dag({0}, {});
    out.added_source = true;
    return out;
  }
  std::vector<Time> wcets = dag.wcets();
  std::vector<Edge> edges = dag.edges();
  int next = static_cast<int>(wcets.size());
  if (srcs.size() == 1) {
    out.source = srcs.front();
  } else {
    out.source = next++;
    out.added_source = true;
    wcets.push_back(0);
    for (int s : srcs) edges.push_back({out.source, s});
  }
  if (snks.size() == 1) {
    out.sink = snks.front();
  } else {
    out.sink = next++;
    out.added_sink = true;
    wcets.push_back(0);
    for (int t : snks) edges.push_back({t, out.sink});
  }
  if (!out.added_source && !out.added_sink) {
    out.dag = dag;
  } else {
    out.dag = Dag(std::move(wcets), std::move(edges));
  }
  return out;
}

std::vector<Time> asap_start_times(const Dag& dag, std::span<const Time> exec_times) {
  if (exec_times.size() != dag.size())
    throw std::invalid_argument("asap_start_times: execution time vector has wrong length");
  for (std::size_t v = 0; v < dag.size(); ++v) {
    if (exec_times[v] < 0 || exec_times[v] > dag.wcet(static_cast<int>(v)))
      throw std::invalid_argument("asap_start_times: execution time of vertex " +
                                  std::to_string(v) + " outside [0, wcet]");
  }
  std::vector<Time> start(dag.size(), 0);
  for (int v : dag.topological_order()) {
    for (int s : dag.successors(v)) {
      auto& st = start[static_cast<std::size_t>(s)];
      st = std::max(st, start[static_cast<std::size_t>(v)] + exec_times[static_cast<std::size_t>(v)]);
    }
  }
  return start;
}

std::vector<Time> asap_start_times(const Dag& dag) { return asap_start_times(dag, dag.wcets()); }

std::size_t count_paths(const Dag& dag, int v, std::size_t cap) {
  const std::size_t limit = cap + 1;
  std::vector<std::size_t> count(dag.size(), 0);
  for (int u : dag.topological_order()) {
    auto& c = count[static_cast<std::size_t>(u)];
    if (dag.predecessors(u).empty()) c = 1;
    for (int p : dag.predecessors(u)) c = std::min(limit, c + count[static_cast<std::size_t>(p)]);
  }
  return count[static_cast<std::size_t>(v)];
}

std::vector<std::vector<int>> enumerate_paths(const Dag& dag, int v, std::size_t cap) {
  if (v < 0 || static_cast<std::size_t>(v) >= dag.size())
    throw std::out_of_range("enumerate_paths: vertex id out of range");
  if (count_paths(dag, v, cap) > cap)
    throw PathExplosionError("more than " + std::to_string(cap) + " paths reach vertex " +
                             std::to_string(v) +
                             "; use the edge-recursive carry-out formulation instead");
  // Walk backwards from v to the sources, then reverse each path.
  std::vector<std::vector<int>> out;
  std::vector<int> stack{v};
  std::function<void(int)> walk = [&](int u) {
    const auto& preds = dag.predecessors(u);
    if (preds.empty()) {
      out.emplace_back(stack.rbegin(), stack.rend());
      return;
    }
    for (int p : preds) {
      stack.push_back(p);
      walk(p);
      stack.pop_back();
    }
  };
  walk(v);
  std::sort(out.begin(), out.end());
  return out;
}

int max_parallelism(const Dag& dag) {
  const std::size_t n = dag.size();
  std::vector<int> active;
  for (std::size_t v = 0; v < n; ++v)
    if (dag.wcet(static_cast<int>(v)) > 0) active.push_back(static_cast<int>(v));
  // Reachability closure, then Dilworth: width = |active| - maximum matching
  // in the bipartite comparability graph.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  const auto& topo = dag.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    auto u = static_cast<std::size_t>(*it);
    for (int s : dag.successors(*it)) {
      auto su = static_cast<std::size_t>(s);
      reach[u][su] = 1;
      for (std::size_t w = 0; w < n; ++w)
        if (reach[su][w]) reach[u][w] = 1;
    }
  }
  const std::size_t k = active.size();
  std::vector<int> match_right(k, -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t a,
                                                                     std::vector<char>& seen) {
    for (std::size_t b = 0; b < k; ++b) {
      if (!reach[static_cast<std::size_t>(active[a])][static_cast<std::size_t>(active[b])] ||
          seen[b])
        continue;
      seen[b] = 1;
      if (match_right[b] < 0 || augment(static_cast<std::size_t>(match_right[b]), seen)) {
        match_right[b] = static_cast<int>(a);
        return true;
      }
    }
    return false;
  };
  int matching = 0;
  for (std::size_t a = 0; a < k; ++a) {
    std::vector<char> seen(k, 0);
    if (augment(a, seen)) ++matching;
  }
  return static_cast<int>(k) - matching;
}

DagTask::DagTask(Dag dag, Time deadline, Time period)
    : dag_(std::move(dag)), deadline_(deadline), period_(period) {
  if (period_ <= 0) throw std::invalid_argument("task period must be positive");
  if (deadline_ <= 0) throw std::invalid_argument("task deadline must be positive");
  if (deadline_ > period_) throw std::invalid_argument("task deadline exceeds its period");
  work_ = dagrta::work(dag_);
  span_ = dagrta::span(dag_);
}

double TaskSet::total_utilization() const {
  double u = 0.0;
  for (const auto& t : tasks) u += t.utilization();
  return u;
}

}  // namespace dagrta
