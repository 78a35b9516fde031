#include "dagrta/carryout.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagrta {

using milp::Sense;
using milp::Term;

namespace {

void build_windowed(CarryOutModel& out) {
  const Dag& g = out.graph.dag;
  const int n = static_cast<int>(g.size());
  const Time d = out.delta;
  milp::Model& mdl = out.model;
  for (int v = 0; v < n; ++v) {
    const std::string id = std::to_string(v);
    const Time cap = std::min(g.wcet(v), d);
    out.x[v] = mdl.add_variable("X" + id, 0, g.wcet(v));
    out.w[v] = mdl.add_variable("W" + id, 0, cap);
    out.s[v] = mdl.add_variable("S" + id, 0, g.predecessors(v).empty() ? 0 : d);
    out.m[v] = -1;
    out.a[v] = mdl.add_binary("A" + id);
  }
  for (int v = 0; v < n; ++v) {
    const std::string id = std::to_string(v);
    mdl.add_row("wx" + id, {{out.w[v], 1}, {out.x[v], -1}}, Sense::LessEqual, 0);
    mdl.add_row("wa" + id, {{out.w[v], 1}, {out.a[v], -std::min(g.wcet(v), d)}}, Sense::LessEqual, 0);
    mdl.add_row("ws" + id, {{out.w[v], 1}, {out.s[v], 1}}, Sense::LessEqual, d);
  }
  for (const Edge& e : g.edges()) {
    const std::string id = std::to_string(e.from) + "_" + std::to_string(e.to);
    const Time c = g.wcet(e.from);
    mdl.add_row("e" + id, {{out.s[e.to], 1}, {out.s[e.from], -1}, {out.x[e.from], -1}, {out.a[e.to], -c}},
                Sense::GreaterEqual, -c);
    mdl.add_row("c" + id, {{out.a[e.to], 1}, {out.a[e.from], -1}}, Sense::LessEqual, 0);
  }
}

void build_literal(CarryOutModel& out, std::size_t path_cap) {
  const Dag& g = out.graph.dag;
  const int n = static_cast<int>(g.size());
  const Time d = out.delta;
  milp::Model& mdl = out.model;
  for (int v = 0; v < n; ++v) {
    const std::string id = std::to_string(v);
    out.x[v] = mdl.add_variable("X" + id, 0, g.wcet(v));
    out.w[v] = mdl.add_variable("W" + id, 0, g.wcet(v));
    out.s[v] = mdl.add_variable("S" + id, 0, out.latest_start[v]);
    out.m[v] = mdl.add_variable("M" + id, 0, d);
    out.a[v] = mdl.add_binary("A" + id);
  }
  for (int v = 0; v < n; ++v) {
    const std::string id = std::to_string(v);
    const Time big = std::max<Time>(0, out.latest_start[v] - d);
    mdl.add_row("wx" + id, {{out.w[v], 1}, {out.x[v], -1}}, Sense::LessEqual, 0);
    mdl.add_row("wm" + id, {{out.w[v], 1}, {out.m[v], -1}}, Sense::LessEqual, 0);
    mdl.add_row("ma" + id, {{out.m[v], 1}, {out.a[v], -d}}, Sense::LessEqual, 0);
    mdl.add_row("ms" + id, {{out.m[v], 1}, {out.s[v], 1}, {out.a[v], big}}, Sense::LessEqual, d + big);
  }
  if (out.formulation == Formulation::EdgeRecursive) {
    for (const Edge& e : g.edges()) {
      mdl.add_row("e" + std::to_string(e.from) + "_" + std::to_string(e.to),
                  {{out.s[e.to], 1}, {out.s[e.from], -1}, {out.x[e.from], -1}}, Sense::GreaterEqual, 0);
    }
    return;
  }
  for (int v = 0; v < n; ++v) {
    if (g.predecessors(v).empty()) continue;
    const auto paths = enumerate_paths(g, v, path_cap);
    for (std::size_t p = 0; p < paths.size(); ++p) {
      std::vector<Term> terms{{out.s[v], 1}};
      for (std::size_t i = 0; i + 1 < paths[p].size(); ++i) terms.push_back({out.x[paths[p][i]], -1});
      mdl.add_row("p" + std::to_string(v) + "_" + std::to_string(p), std::move(terms), Sense::GreaterEqual, 0);
    }
  }
}

}  // namespace

CarryOutModel build_carryout_model(const Dag& dag, Time delta_co, Formulation formulation,
                                   std::size_t path_cap) {
  if (delta_co < 0) throw std::invalid_argument("carry-out window must be non-negative");
  CarryOutModel out;
  out.graph = normalize_source_sink(dag);
  out.delta = delta_co;
  out.formulation = formulation;
  const Dag& g = out.graph.dag;
  const std::size_t n = g.size();
  out.latest_start = asap_start_times(g);
  out.x.resize(n);
  out.w.resize(n);
  out.s.resize(n);
  out.m.resize(n);
  out.a.resize(n);
  if (formulation == Formulation::Windowed) {
    build_windowed(out);
  } else {
    build_literal(out, path_cap);
  }
  std::vector<Term> objective;
  for (std::size_t v = 0; v < n; ++v) objective.push_back({out.w[v], 1});
  out.model.set_objective(std::move(objective));
  std::vector<int> priority;
  for (int v : g.topological_order()) priority.push_back(out.a[v]);
  out.model.set_branch_priority(std::move(priority));
  return out;
}

Time asap_window_workload(const Dag& dag, std::span<const Time> exec_times, Time delta) {
  const auto start = asap_start_times(dag, exec_times);
  Time total = 0;
  for (std::size_t v = 0; v < dag.size(); ++v)
    total += std::min(exec_times[v], std::max<Time>(delta - start[v], 0));
  return total;
}

std::vector<std::int64_t> point_from_exec_times(const CarryOutModel& model,
                                                std::span<const Time> exec_times) {
  const Dag& g = model.graph.dag;
  std::vector<Time> x(g.size(), 0);
  std::copy(exec_times.begin(), exec_times.end(), x.begin());
  const auto start = asap_start_times(g, x);
  std::vector<std::int64_t> point(model.model.variables().size(), 0);
  const Time d = model.delta;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const bool active = start[v] < d;
    const Time headroom = active ? d - start[v] : 0;
    point[model.x[v]] = x[v];
    point[model.a[v]] = active ? 1 : 0;
    point[model.w[v]] = std::min(x[v], headroom);
    if (model.formulation == Formulation::Windowed) {
      point[model.s[v]] = std::min(start[v], d);
    } else {
      point[model.s[v]] = start[v];
      point[model.m[v]] = headroom;
    }
  }
  return point;
}

Time heuristic_carryout(const Dag& dag, Time delta_co, std::vector<Time>* exec_out) {
  std::vector<Time> x = dag.wcets();
  Time best = asap_window_workload(dag, x, delta_co);
  // First-improvement local search over zero/full settings of single vertices.
  bool improved = true;
  for (int pass = 0; improved && pass < 4; ++pass) {
    improved = false;
    for (std::size_t v = 0; v < dag.size(); ++v) {
      if (dag.wcet(static_cast<int>(v)) == 0) continue;
      const Time keep = x[v];
      x[v] = keep == 0 ? dag.wcet(static_cast<int>(v)) : 0;
      const Time value = asap_window_workload(dag, x, delta_co);
      if (value > best) {
        best = value;
        improved = true;
      } else {
        x[v] = keep;
      }
    }
  }
  if (exec_out) *exec_out = x;
  return best;
}

CarryOutSolution solve_exact(const CarryOutModel& model, const milp::SolveOptions& options) {
  const Dag& g = model.graph.dag;
  milp::SolveOptions opts = options;
  if (!opts.warm_start) {
    std::vector<Time> x;
    heuristic_carryout(g, model.delta, &x);
    auto point = point_from_exec_times(model, x);
    // The heuristic point is only usable when it satisfies this model's rows.
    if (model.model.satisfied_by(point)) opts.warm_start = std::move(point);
  }
  const milp::Solution sol = milp::solve(model.model, opts);
  CarryOutSolution out;
  out.objective = sol.objective;
  out.stats = sol.stats;
  out.assignment.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    VertexAssignment& va = out.assignment[v];
    va.x = sol.values[model.x[v]];
    va.w = sol.values[model.w[v]];
    va.s = sol.values[model.s[v]];
    va.a = static_cast<int>(sol.values[model.a[v]]);
    va.m = model.m[v] >= 0 ? sol.values[model.m[v]] : (va.a ? model.delta - va.s : 0);
  }
  return out;
}

Time brute_force_oracle(const Dag& dag, Time delta_co, std::int64_t guard) {
  std::int64_t count = 1;
  for (Time c : dag.wcets()) {
    count *= c + 1;
    if (count > guard) throw std::length_error("brute-force oracle: too many execution-time vectors");
  }
  const std::size_t n = dag.size();
  std::vector<Time> x(n, 0);
  Time best = 0;
  while (true) {
    best = std::max(best, asap_window_workload(dag, x, delta_co));
    std::size_t i = 0;
    while (i < n && x[i] == dag.wcet(static_cast<int>(i))) x[i++] = 0;
    if (i == n) break;
    ++x[i];
  }
  return best;
}

CarryOutBounder::CarryOutBounder(const DagTask& task, milp::SolveOptions options)
    : dag_(&task.dag()),
      options_(std::move(options)),
      work_(task.work()),
      span_(task.span()),
      width_(std::max(1, max_parallelism(task.dag()))) {}

std::optional<Time> CarryOutBounder::known(Time delta_co) const {
  if (delta_co <= 0) return Time{0};
  if (delta_co >= span_) return work_;
  std::lock_guard lock(mu_);
  auto it = memo_.find(delta_co);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

Time CarryOutBounder::upper_bound(Time delta_co) const {
  if (auto k = known(delta_co)) return *k;
  Time ub = std::min<Time>(work_, static_cast<Time>(width_) * delta_co);
  std::lock_guard lock(mu_);
  auto above = memo_.lower_bound(delta_co);
  if (above != memo_.end()) ub = std::min(ub, above->second);
  if (above != memo_.begin()) {
    auto below = std::prev(above);
    ub = std::min(ub, below->second + static_cast<Time>(width_) * (delta_co - below->first));
  }
  return ub;
}

Time CarryOutBounder::objective(Time delta_co) {
  if (auto k = known(delta_co)) return *k;
  std::vector<Time> x;
  const Time lower = heuristic_carryout(*dag_, delta_co, &x);
  return solve_from(delta_co, lower, x);
}

Time CarryOutBounder::solve_from(Time delta_co, Time lower, const std::vector<Time>& exec) {
  Time value = lower;
  if (lower < upper_bound(delta_co)) {
    const CarryOutModel model = build_carryout_model(*dag_, delta_co, Formulation::Windowed);
    milp::SolveOptions opts = options_;
    opts.warm_start = point_from_exec_times(model, exec);
    const milp::Solution sol = milp::solve(model.model, opts);
    value = sol.objective;
    std::lock_guard lock(mu_);
    ++solves_;
    nodes_ += sol.stats.nodes;
  }
  std::lock_guard lock(mu_);
  memo_.emplace(delta_co, value);
  return value;
}

Time CarryOutBounder::bound(Time delta_co, int processors) {
  if (delta_co <= 0) return 0;
  const Time cap = static_cast<Time>(processors) * delta_co;
  if (cap <= 0) return 0;
  if (auto k = known(delta_co)) return std::min(*k, cap);
  std::vector<Time> x;
  const Time lower = heuristic_carryout(*dag_, delta_co, &x);
  // Once the cheap lower bound reaches the processor cap no solve is needed.
  if (lower >= cap) return cap;
  return std::min(solve_from(delta_co, lower, x), cap);
}

std::int64_t CarryOutBounder::solves() const {
  std::lock_guard lock(mu_);
  return solves_;
}

std::int64_t CarryOutBounder::nodes() const {
  std::lock_guard lock(mu_);
  return nodes_;
}

Time carry_out_bound(const DagTask& task, Time delta_co, int processors) {
  CarryOutBounder b(task);
  return b.bound(delta_co, processors);
}

std::string export_model(const CarryOutModel& model, ModelFormat format) {
  return format == ModelFormat::Lp ? milp::write_lp(model.model) : milp::write_mps(model.model);
}

}  // namespace dagrta
