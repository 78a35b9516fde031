#include "dagrta/rta.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dagrta/workload.hpp"

namespace dagrta {

std::string to_string(Method m) { return m == Method::DGA ? "DGA" : "MBB"; }

Method parse_method(const std::string& s) {
  std::string t;
  for (char c : s) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (t == "dga") return Method::DGA;
  if (t == "mbb") return Method::MBB;
  throw std::invalid_argument("unknown method '" + s + "' (expected dga or mbb)");
}

namespace {

Time ceil_div(Time a, Time b) { return (a + b - 1) / b; }

const char* stage_name(FailureStage s) {
  switch (s) {
    case FailureStage::None: return "none";
    case FailureStage::Initialization: return "initialization";
    case FailureStage::FixedPoint: return "fixed-point";
  }
  return "none";
}

}  // namespace

Time response_seed(const DagTask& task, int processors) {
  return task.span() + ceil_div(task.work() - task.span(), processors);
}

FixedPointResult response_time_bound(int k, const TaskSet& ts, const std::vector<Time>& prior_bounds,
                                     const WorkloadFn& workload) {
  const DagTask& task = ts.tasks.at(static_cast<std::size_t>(k));
  const int m = ts.processors;
  FixedPointResult out;
  Time r = response_seed(task, m);
  if (r > task.deadline()) return out;
  for (;;) {
    ++out.iterations;
    Time interference = 0;
    for (int i = 0; i < k; ++i) interference += workload(i, r, prior_bounds[static_cast<std::size_t>(i)]);
    const Time next = task.span() + ceil_div(task.work() - task.span() + interference, m);
    if (next > task.deadline()) return out;
    // Workloads are non-decreasing in the window, so next < r cannot occur;
    // any r with next <= r is a valid bound regardless.
    if (next <= r) {
      out.bound = r;
      return out;
    }
    r = next;
  }
}

DgaWorkload::DgaWorkload(const TaskSet& ts, milp::SolveOptions options)
    : ts_(&ts), options_(std::move(options)), per_task_(ts.tasks.size()) {}

DgaWorkload::PerTask& DgaWorkload::get(int i) {
  PerTask& p = per_task_[static_cast<std::size_t>(i)];
  if (!p.bounder) {
    const DagTask& t = ts_->tasks[static_cast<std::size_t>(i)];
    p.bounder = std::make_unique<CarryOutBounder>(t, options_);
    p.ci_table = carry_in_table(t);
  }
  return p;
}

Time DgaWorkload::operator()(int i, Time delta, Time r_i) {
  PerTask& p = get(i);
  SolverCarryOut co(*p.bounder, ts_->processors);
  return interfering_workload(ts_->tasks[static_cast<std::size_t>(i)], delta, r_i, ts_->processors, co,
                              &p.ci_table);
}

std::int64_t DgaWorkload::solves() const {
  std::int64_t s = 0;
  for (const auto& p : per_task_)
    if (p.bounder) s += p.bounder->solves();
  return s;
}

std::int64_t DgaWorkload::nodes() const {
  std::int64_t s = 0;
  for (const auto& p : per_task_)
    if (p.bounder) s += p.bounder->nodes();
  return s;
}

bool AnalysisReport::same_result(const AnalysisReport& o) const {
  return method == o.method && processors == o.processors && schedulable == o.schedulable &&
         bounds == o.bounds && iterations == o.iterations && failed_task == o.failed_task && stage == o.stage;
}

AnalysisReport schedulability_test(const TaskSet& ts, Method method, const AnalysisOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  if (ts.processors < 1) throw std::invalid_argument("processor count must be positive");
  AnalysisReport rep;
  rep.method = method;
  rep.processors = ts.processors;
  const std::size_t n = ts.tasks.size();
  rep.bounds.assign(n, std::nullopt);
  rep.iterations.assign(n, 0);

  auto finish = [&] {
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  };

  std::vector<Time> seeds(n);
  for (std::size_t k = 0; k < n; ++k) {
    seeds[k] = response_seed(ts.tasks[k], ts.processors);
    if (seeds[k] > ts.tasks[k].deadline() && rep.schedulable) {
      rep.schedulable = false;
      rep.failed_task = static_cast<int>(k);
      rep.stage = FailureStage::Initialization;
    }
  }
  if (!rep.schedulable) return finish();

  DgaWorkload dga(ts, options.solver);
  WorkloadFn fn;
  if (method == Method::DGA) {
    fn = [&](int i, Time delta, Time r_i) { return dga(i, delta, r_i); };
  } else {
    fn = [&](int i, Time delta, Time r_i) {
      return melani_workload(ts.tasks[static_cast<std::size_t>(i)], delta, r_i, ts.processors);
    };
  }

  std::vector<Time> prior(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    const FixedPointResult fp = response_time_bound(static_cast<int>(k), ts, prior, fn);
    rep.iterations[k] = fp.iterations;
    if (!fp.bound) {
      rep.schedulable = false;
      rep.failed_task = static_cast<int>(k);
      rep.stage = FailureStage::FixedPoint;
      break;
    }
    rep.bounds[k] = *fp.bound;
    prior[k] = *fp.bound;
  }
  rep.solves = dga.solves();
  rep.nodes = dga.nodes();
  return finish();
}

std::string report_json(const AnalysisReport& report, const TaskSet& ts, bool with_stats) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["method"] = to_string(report.method);
  j["processors"] = report.processors;
  j["schedulable"] = report.schedulable;
  j["failed_task"] = report.failed_task < 0 ? ordered_json(nullptr) : ordered_json(report.failed_task);
  j["stage"] = stage_name(report.stage);
  ordered_json tasks = ordered_json::array();
  for (std::size_t k = 0; k < ts.tasks.size(); ++k) {
    const DagTask& t = ts.tasks[k];
    ordered_json e;
    e["index"] = k;
    e["work"] = t.work();
    e["span"] = t.span();
    e["deadline"] = t.deadline();
    e["period"] = t.period();
    e["response_bound"] = report.bounds[k] ? ordered_json(*report.bounds[k]) : ordered_json(nullptr);
    e["iterations"] = report.iterations[k];
    tasks.push_back(std::move(e));
  }
  j["tasks"] = std::move(tasks);
  if (with_stats) {
    j["elapsed_ms"] = report.seconds * 1000.0;
    j["ilp_solves"] = report.solves;
    j["ilp_nodes"] = report.nodes;
  }
  return j.dump(2);
}

std::string report_csv_header() { return "method,schedulable,n_tasks,failed_task,stage,bounds"; }

std::string report_csv_row(const AnalysisReport& report) {
  std::ostringstream os;
  os << to_string(report.method) << ',' << (report.schedulable ? 1 : 0) << ',' << report.bounds.size() << ','
     << report.failed_task << ',' << stage_name(report.stage) << ',';
  for (std::size_t k = 0; k < report.bounds.size(); ++k) {
    if (k) os << ';';
    if (report.bounds[k]) {
      os << *report.bounds[k];
    } else {
      os << 'x';
    }
  }
  return os.str();
}

}  // namespace dagrta
