#include "dagrta/io.hpp"

#include <fstream>
#include <sstream>

namespace dagrta {

using nlohmann::json;

SchemaError::SchemaError(std::string where, const std::string& what)
    : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}

namespace {

const json& member(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::int64_t integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
  return v.get<std::int64_t>();
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

const json& object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
  return v;
}

DagTask task_from_json(const json& t, const std::string& path) {
  object(t, path);
  const Time period = integer(member(t, path, "period"), path + "/period");
  const Time deadline = integer(member(t, path, "deadline"), path + "/deadline");
  if (period < 1) throw SchemaError(path + "/period", "must be positive");
  if (deadline < 1) throw SchemaError(path + "/deadline", "must be positive");

  const std::string vpath = path + "/vertices";
  const json& vs = array(member(t, path, "vertices"), vpath);
  if (vs.empty()) throw SchemaError(vpath, "a task needs at least one vertex");
  std::vector<Time> wcets;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string p = vpath + "/" + std::to_string(i);
    const Time c = integer(member(object(vs[i], p), p, "wcet"), p + "/wcet");
    if (c < 0) throw SchemaError(p + "/wcet", "must be non-negative");
    wcets.push_back(c);
  }

  std::vector<Edge> edges;
  const std::string epath = path + "/edges";
  const json& es = t.contains("edges") ? array(t["edges"], epath) : json::array();
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string p = epath + "/" + std::to_string(i);
    if (!es[i].is_array() || es[i].size() != 2) throw SchemaError(p, "expected [src, dst]");
    const auto from = integer(es[i][0], p + "/0");
    const auto to = integer(es[i][1], p + "/1");
    const auto n = static_cast<std::int64_t>(wcets.size());
    if (from < 0 || from >= n) throw SchemaError(p + "/0", "vertex index out of range");
    if (to < 0 || to >= n) throw SchemaError(p + "/1", "vertex index out of range");
    edges.push_back({static_cast<int>(from), static_cast<int>(to)});
  }
  try {
    return DagTask(Dag(std::move(wcets), std::move(edges)), deadline, period);
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

TaskSet taskset_from_json(const json& doc) {
  object(doc, "");
  TaskSet ts;
  const auto m = integer(member(doc, "", "processors"), "/processors");
  if (m < 1) throw SchemaError("/processors", "must be positive");
  ts.processors = static_cast<int>(m);
  const json& tasks = array(member(doc, "", "tasks"), "/tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i)
    ts.tasks.push_back(task_from_json(tasks[i], "/tasks/" + std::to_string(i)));
  return ts;
}

nlohmann::ordered_json taskset_to_json(const TaskSet& ts) {
  nlohmann::ordered_json doc;
  doc["tasks"] = nlohmann::ordered_json::array();
  for (const DagTask& t : ts.tasks) {
    nlohmann::ordered_json jt;
    jt["period"] = t.period();
    jt["deadline"] = t.deadline();
    jt["vertices"] = nlohmann::ordered_json::array();
    for (Time c : t.dag().wcets()) jt["vertices"].push_back({{"wcet", c}});
    jt["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : t.dag().edges()) jt["edges"].push_back({e.from, e.to});
    doc["tasks"].push_back(std::move(jt));
  }
  doc["processors"] = ts.processors;
  return doc;
}

TaskSet parse_taskset(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return taskset_from_json(doc);
}

std::string format_taskset(const TaskSet& ts) { return taskset_to_json(ts).dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

TaskSet load_taskset(const std::string& path) { return parse_taskset(read_file(path)); }

void save_taskset(const std::string& path, const TaskSet& ts) { write_file(path, format_taskset(ts)); }

GenConfig gen_config_from_json(const json& doc, GenConfig c) {
  object(doc, "");
  auto num = [&](const char* key, double& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_number()) throw SchemaError(std::string("/") + key, "expected a number");
    out = doc[key].get<double>();
  };
  auto whole = [&](const char* key, auto& out) {
    if (doc.contains(key)) out = static_cast<std::remove_reference_t<decltype(out)>>(integer(doc[key], std::string("/") + key));
  };
  num("edge_prob", c.edge_prob);
  whole("n_min", c.n_min);
  whole("n_max", c.n_max);
  whole("wcet_min", c.wcet_min);
  whole("wcet_max", c.wcet_max);
  num("beta", c.beta);
  num("util_tolerance", c.util_tolerance);
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      throw SchemaError("/seed", "expected an integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  return c;
}

nlohmann::ordered_json gen_config_to_json(const GenConfig& c) {
  nlohmann::ordered_json j;
  j["edge_prob"] = c.edge_prob;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["wcet_min"] = c.wcet_min;
  j["wcet_max"] = c.wcet_max;
  j["beta"] = c.beta;
  j["util_tolerance"] = c.util_tolerance;
  j["seed"] = c.seed;
  return j;
}

}  // namespace dagrta
