#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagrta::milp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  int var = 0;
  std::int64_t coef = 0;
};

/// Every variable is integer with finite bounds; binaries are [0, 1].
struct Variable {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  bool binary = false;
};

struct Row {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  std::int64_t rhs = 0;
};

/// A maximization problem over bounded integer variables with integer data.
class Model {
 public:
  int add_variable(std::string name, std::int64_t lower, std::int64_t upper);
  int add_binary(std::string name);
  void set_bounds(int var, std::int64_t lower, std::int64_t upper);
  void add_row(std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs);
  void set_objective(std::vector<Term> terms) { objective_ = std::move(terms); }
  /// Variables branched on first, in this order, when fractional.
  void set_branch_priority(std::vector<int> vars) { priority_ = std::move(vars); }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }
  const std::vector<int>& branch_priority() const { return priority_; }
  std::string objective_name = "obj";

  int find(const std::string& name) const;
  std::int64_t objective_value(std::span<const std::int64_t> values) const;
  /// Exact check of bounds and every row.
  bool satisfied_by(std::span<const std::int64_t> values, std::string* violated = nullptr) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Term> objective_;
  std::vector<int> priority_;
};

enum class SolverErrorKind { Infeasible, ResourceLimit, Internal };

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  SolverErrorKind kind() const { return kind_; }

 private:
  SolverErrorKind kind_;
};

struct SolveOptions {
  std::int64_t max_nodes = 2'000'000;
  std::int64_t max_pivots = 200'000'000;
  /// A feasible starting point; used as the first incumbent when valid.
  std::optional<std::vector<std::int64_t>> warm_start;
};

struct SolveStats {
  std::int64_t nodes = 0;
  std::int64_t pivots = 0;
  double seconds = 0.0;
  /// True when the 64-bit rational path overflowed and the solve was redone
  /// with arbitrary-precision rationals.
  bool bignum_fallback = false;
};

struct Solution {
  std::int64_t objective = 0;
  std::vector<std::int64_t> values;
  SolveStats stats;
};

/// Exact branch-and-bound: LP relaxations are solved with a bounded-variable
/// dual simplex in rational arithmetic, warm-started from the parent node.
/// Returns a provably optimal integer solution or throws SolverError.
Solution solve(const Model& model, const SolveOptions& options = {});

/// Optimum of the LP relaxation at the root. The exact value can carry a
/// large denominator, so only its floor and an approximation are reported.
struct LpBound {
  std::int64_t floor = 0;
  double value = 0.0;
};
LpBound solve_relaxation(const Model& model);

/// CPLEX LP text format.
std::string write_lp(const Model& model);
/// Free-form MPS with an OBJSENSE MAX section.
std::string write_mps(const Model& model);

}  // namespace dagrta::milp
