#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dagrta/dag.hpp"
#include "dagrta/taskgen.hpp"

namespace dagrta {

/// Malformed task-set document. `where()` is a JSON pointer to the offending
/// value ("/tasks/1/edges/0"), empty for whole-document problems.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string where, const std::string& what);
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// {"tasks":[{"period","deadline","vertices":[{"wcet"}],"edges":[[src,dst]]}],"processors"}
/// Priorities follow list order.
TaskSet taskset_from_json(const nlohmann::json& doc);
nlohmann::ordered_json taskset_to_json(const TaskSet& ts);

TaskSet parse_taskset(const std::string& text);
std::string format_taskset(const TaskSet& ts);

TaskSet load_taskset(const std::string& path);
void save_taskset(const std::string& path, const TaskSet& ts);

/// Reads any subset of GenConfig fields (edge_prob, n_min, n_max, wcet_min,
/// wcet_max, beta, util_tolerance, seed) over `base`.
GenConfig gen_config_from_json(const nlohmann::json& doc, GenConfig base = {});
nlohmann::ordered_json gen_config_to_json(const GenConfig& config);

/// Whole file as a string; throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace dagrta
