#include "dagrta/workload.hpp"

#include <algorithm>
#include <stdexcept>

namespace dagrta {

namespace {

Time floor_div(Time a, Time b) {
  Time q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Time floor_mod(Time a, Time b) { return a - floor_div(a, b) * b; }

}  // namespace

Time body_workload(const DagTask& task, Time delta, Time r_i) {
  const Time y = delta - task.span() + r_i;
  if (y < 0) return 0;
  return std::max<Time>((y / task.period() - 1) * task.work(), 0);
}

Time carry_in_workload(const DagTask& task, Time ci_len) {
  if (ci_len <= 0) return 0;
  const Time L = task.span();
  if (ci_len >= L) return task.work();
  const Dag& dag = task.dag();
  const auto start = asap_start_times(dag);
  Time total = 0;
  for (std::size_t v = 0; v < dag.size(); ++v) {
    const Time c = dag.wcet(static_cast<int>(v));
    total += std::max<Time>(c - std::max<Time>(L - start[v] - ci_len, 0), 0);
  }
  return total;
}

std::vector<Time> carry_in_table(const DagTask& task) {
  const Time L = task.span();
  const Dag& dag = task.dag();
  const auto start = asap_start_times(dag);
  std::vector<Time> table(static_cast<std::size_t>(L) + 1, 0);
  for (Time len = 1; len <= L; ++len) {
    Time total = 0;
    for (std::size_t v = 0; v < dag.size(); ++v) {
      const Time c = dag.wcet(static_cast<int>(v));
      total += std::max<Time>(c - std::max<Time>(L - start[v] - len, 0), 0);
    }
    table[static_cast<std::size_t>(len)] = total;
  }
  return table;
}

Time melani_workload(const DagTask& task, Time delta, Time r_i, int processors) {
  // With base = delta + R - C/m, scaling by m keeps everything integral:
  //   floor(base / T) = floor(num / (m T)),  m (base mod T) = num - q m T.
  const Time m = processors;
  const Time C = task.work();
  const Time num = m * (delta + r_i) - C;
  if (num < 0) return 0;
  const Time q = num / (m * task.period());
  return q * C + std::min(C, num - q * m * task.period());
}

std::optional<Time> window_total(const DagTask& task, Time delta, Time r_i) {
  const Time y = delta - task.span() + r_i;
  if (y < 0) return std::nullopt;
  return task.span() + floor_mod(y, task.period());
}

std::vector<WindowSplit> window_splits(const DagTask& task, Time delta, Time r_i) {
  std::vector<WindowSplit> out;
  const auto gamma = window_total(task, delta, r_i);
  if (!gamma) return out;
  const Time L = task.span();
  const Time top = std::min(*gamma, L);
  Time ci = top;
  Time co = std::min(*gamma - ci, L);
  out.push_back({ci, co});
  while (co < top && ci > 0) {
    --ci;
    ++co;
    out.push_back({ci, co});
  }
  return out;
}

std::optional<Time> SolverCarryOut::known(Time co_len) {
  if (co_len <= 0) return Time{0};
  const Time cap = static_cast<Time>(m_) * co_len;
  if (auto k = b_->known(co_len)) return std::min(*k, cap);
  return std::nullopt;
}

Time SolverCarryOut::upper_bound(Time co_len) {
  return std::min(b_->upper_bound(co_len), static_cast<Time>(m_) * co_len);
}

Time best_split_workload(const DagTask& task, Time gamma, int processors, CarryOutSource& carry_out,
                         const std::vector<Time>& ci_table) {
  if (gamma <= 0) return 0;
  const Time C = task.work();
  const Time L = task.span();
  const Time m = processors;
  auto cap = [&](Time len, Time v) { return std::min({C, m * len, v}); };
  auto ci_value = [&](Time len) {
    return len >= L ? cap(len, C) : cap(len, ci_table[static_cast<std::size_t>(len)]);
  };

  Time best = 0;
  // Carry-out window covering a whole span: its bound is min{C, m co}.
  if (gamma >= 2 * L) {
    const Time h = gamma / 2;
    best = std::max(best, cap(h, C) + cap(gamma - h, C));
  }
  for (Time ci = 0; ci <= std::min(L - 1, gamma - L); ++ci)
    best = std::max(best, ci_value(ci) + cap(gamma - ci, C));

  // Carry-out windows shorter than the span need the optimization bound.
  struct Candidate {
    Time co;
    Time ci_part;
    Time upper;
  };
  std::vector<Candidate> pending;
  const Time hi = std::min(L - 1, gamma);
  for (Time co = 0; co <= hi; ++co) {
    const Time ci_part = ci_value(gamma - co);
    if (auto k = carry_out.known(co)) {
      best = std::max(best, ci_part + cap(co, *k));
    } else {
      pending.push_back({co, ci_part, ci_part + cap(co, carry_out.upper_bound(co))});
    }
  }
  std::stable_sort(pending.begin(), pending.end(),
                   [](const Candidate& a, const Candidate& b) { return a.upper > b.upper; });
  for (const Candidate& c : pending) {
    if (c.upper <= best) break;
    best = std::max(best, c.ci_part + cap(c.co, carry_out.bound(c.co)));
  }
  return best;
}

Time interfering_workload(const DagTask& task, Time delta, Time r_i, int processors,
                          CarryOutSource& carry_out, const std::vector<Time>* ci_table, WindowRule rule) {
  if (delta <= 0) return 0;
  const Time C = task.work();
  const Time T = task.period();
  const Time m = processors;
  const Time total_cap = m * delta;

  const auto gamma = window_total(task, delta, r_i);
  if (!gamma) return std::min({total_cap, C, carry_out.bound(delta)});

  std::vector<Time> local;
  if (!ci_table) {
    local = carry_in_table(task);
    ci_table = &local;
  }
  if (rule == WindowRule::Literal)
    return std::min(total_cap,
                    body_workload(task, delta, r_i) + best_split_workload(task, *gamma, processors, carry_out, *ci_table));

  // k + 1 jobs overlap the window: k - 1 body jobs plus two outer windows
  // summing to delta + R - k T.
  Time best = std::min(C, total_cap);
  const Time top = (delta + r_i) / T;
  for (Time k = top; k >= 1; --k) {
    if ((k + 1) * C <= best) break;  // no smaller k can do better
    const Time g = delta + r_i - k * T;
    if ((k - 1) * C + std::min(2 * C, m * g) <= best) continue;
    best = std::max(best, (k - 1) * C + best_split_workload(task, g, processors, carry_out, *ci_table));
    if (best >= total_cap) break;
  }
  return std::min(total_cap, best);
}

}  // namespace dagrta
