#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dagrta/carryout.hpp"
#include "dagrta/experiment.hpp"
#include "dagrta/io.hpp"
#include "dagrta/rta.hpp"
#include "dagrta/sim.hpp"
#include "dagrta/taskgen.hpp"

using namespace dagrta;
using nlohmann::json;

namespace {

// Exit status for usage, I/O and schema errors.
constexpr int kError = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

// Generation flags shared by `generate` and `sweep`. Values given on the
// command line win over a --config document.
struct GenFlags {
  GenConfig config;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App* app) {
    opts["edge_prob"] = app->add_option("--edge-prob", config.edge_prob, "Edge probability p");
    opts["n_min"] = app->add_option("--n-min", config.n_min, "Fewest subtasks per DAG");
    opts["n_max"] = app->add_option("--n-max", config.n_max, "Most subtasks per DAG");
    opts["wcet_min"] = app->add_option("--wcet-min", config.wcet_min, "Smallest subtask WCET");
    opts["wcet_max"] = app->add_option("--wcet-max", config.wcet_max, "Largest subtask WCET");
    opts["beta"] = app->add_option("--beta", config.beta, "Minimum task utilization");
    opts["util_tolerance"] = app->add_option("--util-tolerance", config.util_tolerance, "Relative utilization tolerance");
    opts["seed"] = app->add_option("--seed", config.seed, "Master seed");
  }

  // Merges the document under the explicit flags.
  void merge(const json& doc) {
    GenConfig flags = config;
    config = gen_config_from_json(doc, config);
    json explicit_values = gen_config_to_json(flags);
    for (auto& [key, opt] : opts) {
      if (opt->count() > 0) {
        json one;
        one[key] = explicit_values[key];
        config = gen_config_from_json(one, config);
      }
    }
  }
};

json load_config(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("", path + ": invalid JSON at byte " + std::to_string(e.byte));
  }
}

template <class T>
void config_value(const json& doc, const char* key, T& out, const CLI::Option* opt) {
  if (!doc.contains(key) || (opt && opt->count() > 0)) return;
  try {
    out = doc[key].get<T>();
  } catch (const json::exception&) {
    throw SchemaError(std::string("/") + key, "wrong type");
  }
}

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_method(item));
  }
  if (out.empty()) throw UsageError("no method given");
  return out;
}

Formulation parse_formulation(const std::string& s) {
  if (s == "edge") return Formulation::EdgeRecursive;
  if (s == "path") return Formulation::PathEnumerated;
  if (s == "windowed") return Formulation::Windowed;
  throw UsageError("unknown formulation '" + s + "' (expected edge, path or windowed)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Response-time analysis for sporadic DAG tasks under global fixed-priority scheduling"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random task set (JSON)");
  GenFlags gen_flags;
  gen_flags.add(gen);
  double gen_util = 4.0;
  int gen_m = 16;
  std::string gen_out, gen_config;
  auto* gen_util_opt = gen->add_option("-u,--util", gen_util, "Total utilization");
  auto* gen_m_opt = gen->add_option("-m,--processors", gen_m, "Processor count");
  gen->add_option("-o,--output", gen_out, "Output file (stdout when omitted)");
  gen->add_option("--config", gen_config, "JSON document with the same fields")->check(CLI::ExistingFile);

  // analyze
  auto* ana = app.add_subcommand("analyze", "Run the schedulability test on a task-set file");
  std::string ana_file, ana_method = "dga";
  int ana_m = 0;
  bool ana_stats = false;
  ana->add_option("file", ana_file, "Task-set JSON")->required();
  ana->add_option("--method", ana_method, "dga or mbb");
  ana->add_option("-m,--processors", ana_m, "Override the processor count");
  ana->add_flag("--stats", ana_stats, "Include timing and solver statistics");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Schedulability-ratio sweep (CSV)");
  GenFlags sw_flags;
  sw_flags.add(sw);
  std::string sw_variable = "util", sw_methods = "dga,mbb", sw_out, sw_config;
  std::vector<double> sw_points;
  int sw_m = 16, sw_sets = 100, sw_threads = 1;
  double sw_norm = 0.5;
  bool sw_full = false, sw_check = false, sw_timing = false;
  auto* sw_var_opt = sw->add_option("--variable", sw_variable, "util or procs")->check(CLI::IsMember({"util", "procs"}));
  auto* sw_points_opt = sw->add_option("--points", sw_points, "Grid values (utilizations or processor counts)")->delimiter(',');
  auto* sw_m_opt = sw->add_option("-m,--processors", sw_m, "Processor count for a utilization sweep");
  auto* sw_norm_opt = sw->add_option("--norm-util", sw_norm, "U / m for a processor sweep");
  auto* sw_sets_opt = sw->add_option("--sets", sw_sets, "Task sets per point");
  auto* sw_methods_opt = sw->add_option("--methods", sw_methods, "Comma-separated methods");
  auto* sw_threads_opt = sw->add_option("-j,--threads", sw_threads, "Worker threads");
  sw->add_flag("--full-scale", sw_full, "n in [10, 20] and 500 sets per point unless overridden");
  sw->add_flag("--check-dominance", sw_check, "Exit 1 unless DGA >= MBB on every row and every task bound");
  sw->add_flag("--timing", sw_timing, "Report mean analysis time instead of NA");
  sw->add_option("-o,--output", sw_out, "Output CSV (stdout when omitted)");
  sw->add_option("--config", sw_config, "JSON document with sweep and generator fields")->check(CLI::ExistingFile);

  // dump-model
  auto* dm = app.add_subcommand("dump-model", "Export the carry-out program of one task");
  std::string dm_file, dm_format = "lp", dm_form = "edge", dm_out;
  int dm_task = 0;
  Time dm_delta = 0;
  dm->add_option("file", dm_file, "Task-set JSON")->required();
  dm->add_option("--task", dm_task, "Task index");
  dm->add_option("--delta", dm_delta, "Carry-out window length")->required();
  dm->add_option("--format", dm_format, "lp or mps")->check(CLI::IsMember({"lp", "mps"}));
  dm->add_option("--formulation", dm_form, "edge, path or windowed");
  dm->add_option("-o,--output", dm_out, "Output file (stdout when omitted)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a task set and report observed response times");
  std::string sim_file, sim_release = "periodic", sim_exec = "wcet", sim_trace;
  Time sim_horizon = 0;
  std::uint64_t sim_seed = 1;
  bool sim_check = false;
  sim->add_option("file", sim_file, "Task-set JSON")->required();
  sim->add_option("--horizon", sim_horizon, "Release horizon (default: 10 times the largest period)");
  sim->add_option("--release", sim_release, "periodic or sporadic")->check(CLI::IsMember({"periodic", "sporadic"}));
  sim->add_option("--exec", sim_exec, "wcet or random")->check(CLI::IsMember({"wcet", "random"}));
  sim->add_option("--seed", sim_seed, "Random seed");
  sim->add_option("--trace", sim_trace, "Write execution segments as JSON lines");
  sim->add_flag("--check", sim_check, "Exit 1 if a response exceeds its DGA bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  try {
    if (gen->parsed()) {
      if (!gen_config.empty()) {
        const json doc = load_config(gen_config);
        gen_flags.merge(doc);
        config_value(doc, "util", gen_util, gen_util_opt);
        config_value(doc, "processors", gen_m, gen_m_opt);
      }
      Rng rng(gen_flags.config.seed);
      const TaskSet ts = assign_priorities_dm(gen_taskset(gen_util, gen_m, gen_flags.config, rng));
      emit(gen_out, format_taskset(ts));
      return 0;
    }

    if (ana->parsed()) {
      TaskSet ts = load_taskset(ana_file);
      if (ana_m > 0) ts.processors = ana_m;
      const AnalysisReport r = schedulability_test(ts, parse_method(ana_method));
      std::cout << report_json(r, ts, ana_stats) << "\n";
      return r.schedulable ? 0 : 1;
    }

    if (sw->parsed()) {
      ExperimentSpec spec = sw_full ? full_spec() : desk_spec();
      if (sw_flags.opts["n_min"]->count() == 0) sw_flags.config.n_min = spec.gen.n_min;
      if (sw_flags.opts["n_max"]->count() == 0) sw_flags.config.n_max = spec.gen.n_max;
      if (sw_sets_opt->count() == 0) sw_sets = spec.sets_per_point;
      if (!sw_config.empty()) {
        const json doc = load_config(sw_config);
        sw_flags.merge(doc);
        config_value(doc, "variable", sw_variable, sw_var_opt);
        config_value(doc, "points", sw_points, sw_points_opt);
        config_value(doc, "processors", sw_m, sw_m_opt);
        config_value(doc, "norm_util", sw_norm, sw_norm_opt);
        config_value(doc, "sets", sw_sets, sw_sets_opt);
        config_value(doc, "methods", sw_methods, sw_methods_opt);
        config_value(doc, "threads", sw_threads, sw_threads_opt);
      }
      spec.gen = sw_flags.config;
      spec.seed = sw_flags.config.seed;
      spec.sweep = sw_variable == "util" ? SweepVariable::Utilization : SweepVariable::Processors;
      spec.points = sw_points;
      if (spec.points.empty()) {
        if (spec.sweep == SweepVariable::Utilization) {
          for (int u = 1; u <= 14; ++u) spec.points.push_back(u);
        } else {
          for (int m = 2; m <= 36; m += 2) spec.points.push_back(m);
        }
      }
      spec.processors = sw_m;
      spec.normalized_util = sw_norm;
      spec.sets_per_point = sw_sets;
      spec.methods = parse_methods(sw_methods);
      spec.threads = sw_threads;
      spec.timing = sw_timing;
      try {
        spec.validate();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      const ExperimentResult res = run_experiment(spec);
      emit(sw_out, experiment_csv(res));
      if (sw_check) {
        const auto bad = dominance_failures(res);
        for (double p : bad) std::cerr << "dominance: DGA ratio below MBB at point " << p << "\n";
        if (res.bound_violations > 0)
          std::cerr << "dominance: " << res.bound_violations << " task bounds where DGA exceeds MBB\n";
        if (res.verdict_violations > 0)
          std::cerr << "dominance: " << res.verdict_violations << " sets accepted by MBB only\n";
        if (!bad.empty() || res.bound_violations > 0 || res.verdict_violations > 0) return 1;
      }
      return 0;
    }

    if (dm->parsed()) {
      const TaskSet ts = load_taskset(dm_file);
      if (dm_task < 0 || dm_task >= static_cast<int>(ts.tasks.size()))
        throw UsageError("task index " + std::to_string(dm_task) + " out of range");
      if (dm_delta < 0) throw UsageError("delta must be non-negative");
      const auto& task = ts.tasks[static_cast<std::size_t>(dm_task)];
      const CarryOutModel model = build_carryout_model(task.dag(), dm_delta, parse_formulation(dm_form));
      emit(dm_out, export_model(model, dm_format == "lp" ? ModelFormat::Lp : ModelFormat::Mps));
      return 0;
    }

    if (sim->parsed()) {
      const TaskSet ts = load_taskset(sim_file);
      SimConfig cfg;
      Time max_period = 1;
      for (const auto& t : ts.tasks) max_period = std::max(max_period, t.period());
      cfg.horizon = sim_horizon > 0 ? sim_horizon : 10 * max_period;
      cfg.release = sim_release == "periodic" ? ReleasePolicy::Periodic : ReleasePolicy::SporadicRandom;
      cfg.exec = sim_exec == "wcet" ? ExecPolicy::FullWcet : ExecPolicy::UniformRandom;
      cfg.seed = sim_seed;
      const ScheduleTrace trace = simulate(ts, cfg);
      if (!sim_trace.empty()) write_file(sim_trace, trace_jsonl(trace));

      std::vector<Time> worst(ts.tasks.size(), 0);
      std::vector<int> jobs(ts.tasks.size(), 0), misses(ts.tasks.size(), 0);
      for (const JobRecord& j : trace.jobs) {
        const auto t = static_cast<std::size_t>(j.task);
        worst[t] = std::max(worst[t], j.response());
        ++jobs[t];
        misses[t] += j.completion > j.deadline;
      }
      std::optional<AnalysisReport> bounds;
      if (sim_check) bounds = schedulability_test(ts, Method::DGA);
      bool violated = false;
      nlohmann::ordered_json out;
      out["horizon"] = cfg.horizon;
      out["tasks"] = nlohmann::ordered_json::array();
      for (std::size_t t = 0; t < ts.tasks.size(); ++t) {
        nlohmann::ordered_json jt;
        jt["jobs"] = jobs[t];
        jt["max_response"] = worst[t];
        jt["deadline_misses"] = misses[t];
        if (bounds) {
          const auto& b = bounds->bounds[t];
          jt["dga_bound"] = b ? nlohmann::ordered_json(*b) : nlohmann::ordered_json(nullptr);
          if (b && worst[t] > *b) violated = true;
        }
        out["tasks"].push_back(std::move(jt));
      }
      std::cout << out.dump(2) << "\n";
      return violated ? 1 : 0;
    }
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kError;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
