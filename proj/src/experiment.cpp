#include "dagrta/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dagrta {

void ExperimentSpec::validate() const {
  if (points.empty()) throw std::invalid_argument("sweep grid is empty");
  if (sets_per_point < 1) throw std::invalid_argument("sets per point must be at least 1");
  if (methods.empty()) throw std::invalid_argument("no analysis method selected");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
  for (double p : points) {
    if (!(p > 0.0)) throw std::invalid_argument("sweep points must be positive");
    if (sweep == SweepVariable::Processors && p != static_cast<double>(static_cast<int>(p)))
      throw std::invalid_argument("processor counts must be integers");
  }
  if (sweep == SweepVariable::Utilization && processors < 1) throw std::invalid_argument("processors must be positive");
  if (sweep == SweepVariable::Processors && !(normalized_util > 0.0))
    throw std::invalid_argument("normalized utilization must be positive");
  gen.validate();
}

ExperimentSpec desk_spec() {
  ExperimentSpec s;
  s.gen.n_min = 5;
  s.gen.n_max = 10;
  s.sets_per_point = 100;
  return s;
}

ExperimentSpec full_spec() {
  ExperimentSpec s;
  s.gen.n_min = 10;
  s.gen.n_max = 20;
  s.sets_per_point = 500;
  return s;
}

TaskSet experiment_taskset(const ExperimentSpec& spec, std::size_t point_index, int index) {
  const double p = spec.points[point_index];
  int m = spec.processors;
  double u = p;
  if (spec.sweep == SweepVariable::Processors) {
    m = static_cast<int>(p);
    u = spec.normalized_util * m;
  }
  Rng rng(derive_seed(derive_seed(spec.seed, point_index), static_cast<std::uint64_t>(index)));
  return assign_priorities_dm(gen_taskset(u, m, spec.gen, rng));
}

namespace {

struct Outcome {
  bool ok = false;
  bool schedulable = false;
  double ms = 0.0;
  std::vector<std::optional<Time>> bounds;
};

Outcome analyze(const TaskSet& ts, Method method, const AnalysisOptions& options) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const AnalysisReport r = schedulability_test(ts, method, options);
    o.ok = true;
    o.schedulable = r.schedulable;
    o.bounds = r.bounds;
  } catch (const milp::SolverError&) {
    o.ok = false;
  }
  o.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.timing = spec.timing;
  const std::size_t nm = spec.methods.size();
  const int dga = static_cast<int>(std::find(spec.methods.begin(), spec.methods.end(), Method::DGA) - spec.methods.begin());
  const int mbb = static_cast<int>(std::find(spec.methods.begin(), spec.methods.end(), Method::MBB) - spec.methods.begin());
  const bool both = dga < static_cast<int>(nm) && mbb < static_cast<int>(nm);
  AnalysisOptions options;
  options.solver = spec.solver;

  for (std::size_t pi = 0; pi < spec.points.size(); ++pi) {
    const auto sets = static_cast<std::size_t>(spec.sets_per_point);
    std::vector<std::vector<Outcome>> out(sets, std::vector<Outcome>(nm));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (;;) {
        const std::size_t s = next.fetch_add(1);
        if (s >= sets || failed) return;
        try {
          const TaskSet ts = experiment_taskset(spec, pi, static_cast<int>(s));
          for (std::size_t k = 0; k < nm; ++k) out[s][k] = analyze(ts, spec.methods[k], options);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    };
    const int nt = std::min<int>(spec.threads, spec.sets_per_point);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t k = 0; k < nm; ++k) {
      ExperimentRow row;
      row.point = spec.points[pi];
      row.method = spec.methods[k];
      double total_ms = 0.0;
      for (std::size_t s = 0; s < sets; ++s) {
        const Outcome& o = out[s][k];
        if (!o.ok) {
          ++row.warnings;
          continue;
        }
        ++row.n_sets;
        row.schedulable += o.schedulable;
        total_ms += o.ms;
      }
      row.mean_ms = row.n_sets > 0 ? total_ms / row.n_sets : 0.0;
      result.rows.push_back(row);
    }
    if (both) {
      for (std::size_t s = 0; s < sets; ++s) {
        const Outcome& a = out[s][static_cast<std::size_t>(dga)];
        const Outcome& b = out[s][static_cast<std::size_t>(mbb)];
        if (!a.ok || !b.ok) continue;
        if (b.schedulable && !a.schedulable) ++result.verdict_violations;
        for (std::size_t t = 0; t < a.bounds.size(); ++t) {
          if (b.bounds[t] && (!a.bounds[t] || *a.bounds[t] > *b.bounds[t])) ++result.bound_violations;
        }
      }
    }
  }
  return result;
}

std::string experiment_csv_header() { return "point,method,ratio,n_sets,warnings,mean_ms"; }

std::string experiment_csv(const ExperimentResult& result) {
  std::ostringstream os;
  os << experiment_csv_header() << "\n";
  for (const ExperimentRow& r : result.rows) {
    os << format_double(r.point, "%g") << ',' << to_string(r.method) << ',' << format_double(r.ratio(), "%.4f") << ','
       << r.n_sets << ',' << r.warnings << ',' << (result.timing ? format_double(r.mean_ms, "%.3f") : "NA") << "\n";
  }
  return os.str();
}

std::vector<double> dominance_failures(const ExperimentResult& result) {
  std::vector<double> bad;
  for (const ExperimentRow& a : result.rows) {
    if (a.method != Method::DGA) continue;
    for (const ExperimentRow& b : result.rows) {
      if (b.method == Method::MBB && b.point == a.point && a.ratio() < b.ratio()) bad.push_back(a.point);
    }
  }
  return bad;
}

}  // namespace dagrta
