#include "dagrta/milp.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <limits>
#include <utility>

#include "dagrta/rational.hpp"

namespace dagrta::milp {

int Model::add_variable(std::string name, std::int64_t lower, std::int64_t upper) {
  if (lower > upper) throw std::invalid_argument("variable " + name + " has empty bounds");
  vars_.push_back({std::move(name), lower, upper, false});
  return static_cast<int>(vars_.size()) - 1;
}

int Model::add_binary(std::string name) {
  vars_.push_back({std::move(name), 0, 1, true});
  return static_cast<int>(vars_.size()) - 1;
}

void Model::set_bounds(int var, std::int64_t lower, std::int64_t upper) {
  if (lower > upper) throw std::invalid_argument("set_bounds: empty bounds");
  auto& v = vars_.at(static_cast<std::size_t>(var));
  v.lower = lower;
  v.upper = upper;
}

void Model::add_row(std::string name, std::vector<Term> terms, Sense sense, std::int64_t rhs) {
  for (const Term& t : terms)
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= vars_.size())
      throw std::out_of_range("row " + name + " references an unknown variable");
  rows_.push_back({std::move(name), std::move(terms), sense, rhs});
}

int Model::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

std::int64_t Model::objective_value(std::span<const std::int64_t> values) const {
  std::int64_t v = 0;
  for (const Term& t : objective_) v += t.coef * values[static_cast<std::size_t>(t.var)];
  return v;
}

bool Model::satisfied_by(std::span<const std::int64_t> values, std::string* violated) const {
  if (values.size() != vars_.size()) {
    if (violated) *violated = "value vector has wrong length";
    return false;
  }
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (values[i] < vars_[i].lower || values[i] > vars_[i].upper) {
      if (violated) *violated = "bounds of " + vars_[i].name;
      return false;
    }
  }
  for (const Row& r : rows_) {
    __int128 lhs = 0;
    for (const Term& t : r.terms) lhs += static_cast<__int128>(t.coef) * values[static_cast<std::size_t>(t.var)];
    bool ok = true;
    switch (r.sense) {
      case Sense::LessEqual: ok = lhs <= r.rhs; break;
      case Sense::GreaterEqual: ok = lhs >= r.rhs; break;
      case Sense::Equal: ok = lhs == r.rhs; break;
    }
    if (!ok) {
      if (violated) *violated = r.name;
      return false;
    }
  }
  return true;
}

namespace {

// Number-type adapters so the simplex runs over both checked int64 rationals
// and GMP rationals.
inline int sign_of(const Rational& x) { return x.sign(); }
inline int sign_of(const mpq_class& x) { return sgn(x); }
inline bool integral(const Rational& x) { return x.is_integer(); }
inline bool integral(const mpq_class& x) { return x.get_den() == 1; }
inline std::int64_t floor_of(const Rational& x) { return x.floor(); }
inline std::int64_t floor_of(const mpq_class& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  if (!q.fits_slong_p()) throw SolverError(SolverErrorKind::Internal, "value exceeds 64 bits");
  return q.get_si();
}
inline LpBound to_bound(const Rational& x) { return {x.floor(), x.to_double()}; }
inline LpBound to_bound(const mpq_class& x) { return {floor_of(x), x.get_d()}; }
template <class N>
N make(std::int64_t v) {
  if constexpr (std::is_same_v<N, mpq_class>) {
    return mpq_class(static_cast<long>(v));
  } else {
    return N(v);
  }
}
template <class N>
N abs_of(const N& x) {
  return sign_of(x) < 0 ? N(-x) : x;
}

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();

// Internal LP in the form  T x = b  with bounded columns. Columns are the
// non-fixed structural variables followed by one slack per row. The tableau
// is kept dense in B^-1 A form; pivots only touch nonzero entries.
template <class N>
class DualSimplex {
 public:
  struct Setup {
    std::vector<int> struct_var;  // model variable of each structural column
    std::vector<std::int64_t> lo, hi, cost;
    std::vector<std::vector<Term>> rows;  // terms reference structural columns
    std::vector<std::int64_t> rhs;
    std::vector<bool> equality;
    std::int64_t objective_offset = 0;
  };

  explicit DualSimplex(const Setup& s) {
    m_ = s.rows.size();
    ns_ = s.lo.size();
    n_ = ns_ + m_;
    lo_ = s.lo;
    hi_ = s.hi;
    cost_ = s.cost;
    for (std::size_t i = 0; i < m_; ++i) {
      lo_.push_back(0);
      hi_.push_back(s.equality[i] ? 0 : kInf);
      cost_.push_back(0);
    }
    tab_.assign(m_ * n_, make<N>(0));
    at_upper_.assign(n_, 0);
    pos_.assign(n_, -1);
    basis_.resize(m_);
    for (std::size_t j = 0; j < ns_; ++j) at_upper_[j] = cost_[j] > 0 ? 1 : 0;
    xb_.assign(m_, make<N>(0));
    for (std::size_t i = 0; i < m_; ++i) {
      N b = make<N>(s.rhs[i]);
      for (const Term& t : s.rows[i]) {
        auto j = static_cast<std::size_t>(t.var);
        at(i, j) += make<N>(t.coef);
        b -= make<N>(t.coef) * make<N>(value_bound(j));
      }
      at(i, ns_ + i) = make<N>(1);
      basis_[i] = static_cast<int>(ns_ + i);
      pos_[ns_ + i] = static_cast<int>(i);
      xb_[i] = b;
    }
    d_.assign(n_, make<N>(0));
    for (std::size_t j = 0; j < ns_; ++j) d_[j] = make<N>(cost_[j]);
    offset_ = s.objective_offset;
  }

  enum class Status { Optimal, Infeasible };

  Status run(std::int64_t& pivot_budget) {
    int stall = 0;
    bool bland = false;
    N last_obj = objective();
    for (;;) {
      int r = choose_leaving(bland);
      if (r < 0) return Status::Optimal;
      const int var = basis_[static_cast<std::size_t>(r)];
      const bool below = xb_[static_cast<std::size_t>(r)] < make<N>(lo_[static_cast<std::size_t>(var)]);
      int q = choose_entering(static_cast<std::size_t>(r), below);
      if (q < 0) return Status::Infeasible;
      if (--pivot_budget < 0)
        throw SolverError(SolverErrorKind::ResourceLimit, "simplex pivot limit exceeded");
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(q), below);
      N obj = objective();
      if (obj < last_obj) {
        stall = 0;
        last_obj = obj;
      } else if (++stall > 50) {
        bland = true;
      }
    }
  }

  N objective() const {
    N v = make<N>(offset_);
    for (std::size_t j = 0; j < ns_; ++j)
      if (cost_[j] != 0) v += make<N>(cost_[j]) * value(j);
    return v;
  }

  N value(std::size_t j) const {
    if (pos_[j] >= 0) return xb_[static_cast<std::size_t>(pos_[j])];
    return make<N>(value_bound(j));
  }

  std::size_t structural_count() const { return ns_; }
  std::int64_t lower(std::size_t j) const { return lo_[j]; }
  std::int64_t upper(std::size_t j) const { return hi_[j]; }

  /// Tightens the bounds of structural column j, keeping dual feasibility.
  void set_bounds(std::size_t j, std::int64_t lo, std::int64_t hi) {
    if (pos_[j] >= 0) {
      lo_[j] = lo;
      hi_[j] = hi;
      return;
    }
    const std::int64_t old = value_bound(j);
    lo_[j] = lo;
    hi_[j] = hi;
    const std::int64_t now = value_bound(j);
    if (now == old) return;
    const N delta = make<N>(now - old);
    for (std::size_t i = 0; i < m_; ++i) {
      const N& a = at(i, j);
      if (sign_of(a) != 0) xb_[i] -= a * delta;
    }
  }

 private:
  N& at(std::size_t i, std::size_t j) { return tab_[i * n_ + j]; }
  const N& at(std::size_t i, std::size_t j) const { return tab_[i * n_ + j]; }
  std::int64_t value_bound(std::size_t j) const { return at_upper_[j] ? hi_[j] : lo_[j]; }

  int choose_leaving(bool bland) const {
    int best = -1;
    N best_violation = make<N>(0);
    int best_var = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < m_; ++i) {
      const auto var = static_cast<std::size_t>(basis_[i]);
      N violation = make<N>(0);
      if (xb_[i] < make<N>(lo_[var])) {
        violation = make<N>(lo_[var]) - xb_[i];
      } else if (hi_[var] != kInf && xb_[i] > make<N>(hi_[var])) {
        violation = xb_[i] - make<N>(hi_[var]);
      } else {
        continue;
      }
      if (bland) {
        if (static_cast<int>(var) < best_var) {
          best_var = static_cast<int>(var);
          best = static_cast<int>(i);
        }
      } else if (violation > best_violation) {
        best_violation = violation;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  int choose_entering(std::size_t r, bool increase) const {
    int best = -1;
    N best_ratio = make<N>(0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const N& a = at(r, j);
      const int s = sign_of(a);
      if (s == 0) continue;
      const bool upper = at_upper_[j] != 0;
      // Row r reads x_B + sum a_j x_j = const, so x_B moves opposite to a_j x_j.
      const bool eligible = increase ? ((!upper && s < 0) || (upper && s > 0))
                                     : ((!upper && s > 0) || (upper && s < 0));
      if (!eligible) continue;
      N ratio = abs_of(N(d_[j] / a));
      if (best < 0 || ratio < best_ratio) {
        best = static_cast<int>(j);
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t q, bool below) {
    const auto leaving = static_cast<std::size_t>(basis_[r]);
    const std::int64_t target = below ? lo_[leaving] : hi_[leaving];
    const N alpha = at(r, q);
    const N step = (xb_[r] - make<N>(target)) / alpha;
    const N entering_value = value(q) + step;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      const N& a = at(i, q);
      if (sign_of(a) != 0) xb_[i] -= a * step;
    }
    xb_[r] = entering_value;
    at_upper_[leaving] = below ? 0 : 1;
    pos_[leaving] = -1;

    // Normalize the pivot row and collect its support.
    nz_.clear();
    N* row_r = &tab_[r * n_];
    for (std::size_t j = 0; j < n_; ++j) {
      if (sign_of(row_r[j]) == 0) continue;
      row_r[j] /= alpha;
      nz_.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      N* row_i = &tab_[i * n_];
      if (sign_of(row_i[q]) == 0) continue;
      const N f = row_i[q];
      for (std::size_t j : nz_) row_i[j] -= f * row_r[j];
    }
    if (sign_of(d_[q]) != 0) {
      const N f = d_[q];
      for (std::size_t j : nz_) d_[j] -= f * row_r[j];
    }
    basis_[r] = static_cast<int>(q);
    pos_[q] = static_cast<int>(r);
  }

  std::size_t m_ = 0, ns_ = 0, n_ = 0;
  std::vector<std::int64_t> lo_, hi_, cost_;
  std::vector<N> tab_, xb_, d_;
  std::vector<int> basis_, pos_;
  std::vector<char> at_upper_;
  std::vector<std::size_t> nz_;
  std::int64_t offset_ = 0;
};

// Drops root-fixed variables and normalizes rows to  a x + s = b  form.
template <class N>
typename DualSimplex<N>::Setup presolve(const Model& model, std::vector<int>& column_of) {
  typename DualSimplex<N>::Setup s;
  const auto& vars = model.variables();
  column_of.assign(vars.size(), -1);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].lower == vars[v].upper) continue;
    column_of[v] = static_cast<int>(s.struct_var.size());
    s.struct_var.push_back(static_cast<int>(v));
    s.lo.push_back(vars[v].lower);
    s.hi.push_back(vars[v].upper);
    s.cost.push_back(0);
  }
  for (const Term& t : model.objective()) {
    const int c = column_of[static_cast<std::size_t>(t.var)];
    if (c < 0) {
      s.objective_offset += t.coef * vars[static_cast<std::size_t>(t.var)].lower;
    } else {
      s.cost[static_cast<std::size_t>(c)] += t.coef;
    }
  }
  for (const Row& r : model.rows()) {
    std::vector<Term> terms;
    std::int64_t rhs = r.rhs;
    for (const Term& t : r.terms) {
      const int c = column_of[static_cast<std::size_t>(t.var)];
      if (c < 0) {
        rhs -= t.coef * vars[static_cast<std::size_t>(t.var)].lower;
      } else {
        auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& x) { return x.var == c; });
        if (it == terms.end()) {
          terms.push_back({c, t.coef});
        } else {
          it->coef += t.coef;
        }
      }
    }
    std::erase_if(terms, [](const Term& t) { return t.coef == 0; });
    if (terms.empty()) {
      const bool ok = r.sense == Sense::LessEqual ? 0 <= rhs
                      : r.sense == Sense::GreaterEqual ? 0 >= rhs
                                                        : rhs == 0;
      if (!ok) throw SolverError(SolverErrorKind::Infeasible, "row " + r.name + " is infeasible");
      continue;
    }
    if (r.sense == Sense::GreaterEqual) {
      for (auto& t : terms) t.coef = -t.coef;
      rhs = -rhs;
    }
    s.rows.push_back(std::move(terms));
    s.rhs.push_back(rhs);
    s.equality.push_back(r.sense == Sense::Equal);
  }
  return s;
}

template <class N>
struct BranchAndBound {
  const Model& model;
  const SolveOptions& options;
  std::vector<int> column_of;
  typename DualSimplex<N>::Setup setup;
  std::vector<int> priority;  // structural columns, branching order
  SolveStats stats;
  bool have_incumbent = false;
  std::int64_t incumbent = 0;
  std::vector<std::int64_t> best;

  BranchAndBound(const Model& m, const SolveOptions& o) : model(m), options(o) {
    setup = presolve<N>(model, column_of);
    for (int v : model.branch_priority()) {
      const int c = column_of[static_cast<std::size_t>(v)];
      if (c >= 0) priority.push_back(c);
    }
  }

  std::vector<std::int64_t> extract(const DualSimplex<N>& lp) const {
    std::vector<std::int64_t> values(model.variables().size());
    for (std::size_t v = 0; v < values.size(); ++v) {
      const int c = column_of[v];
      values[v] = c < 0 ? model.variables()[v].lower : floor_of(lp.value(static_cast<std::size_t>(c)));
    }
    return values;
  }

  // First fractional column by priority, then by index; -1 when integral.
  int branching_column(const DualSimplex<N>& lp) const {
    for (int c : priority)
      if (!integral(lp.value(static_cast<std::size_t>(c)))) return c;
    for (std::size_t c = 0; c < lp.structural_count(); ++c)
      if (!integral(lp.value(c))) return static_cast<int>(c);
    return -1;
  }

  void offer(const std::vector<std::int64_t>& values) {
    std::string why;
    if (!model.satisfied_by(values, &why))
      throw SolverError(SolverErrorKind::Internal, "integral LP point violates " + why);
    const std::int64_t obj = model.objective_value(values);
    if (!have_incumbent || obj > incumbent) {
      have_incumbent = true;
      incumbent = obj;
      best = values;
    }
  }

  Solution run() {
    if (options.warm_start && model.satisfied_by(*options.warm_start)) offer(*options.warm_start);
    std::int64_t pivot_budget = options.max_pivots;
    struct Pending {
      DualSimplex<N> lp;
      std::size_t column;
      std::int64_t lo, hi;
    };
    std::vector<Pending> stack;
    DualSimplex<N> current(setup);
    bool have_node = true;
    while (have_node) {
      if (++stats.nodes > options.max_nodes)
        throw SolverError(SolverErrorKind::ResourceLimit, "branch-and-bound node limit exceeded");
      const auto status = current.run(pivot_budget);
      bool prune = status == DualSimplex<N>::Status::Infeasible;
      if (!prune) {
        const N bound = current.objective();
        if (have_incumbent && floor_of(bound) <= incumbent) prune = true;
      }
      if (!prune) {
        const int c = branching_column(current);
        if (c < 0) {
          offer(extract(current));
        } else {
          const auto col = static_cast<std::size_t>(c);
          const std::int64_t down = floor_of(current.value(col));
          const std::int64_t lo = current.lower(col);
          const std::int64_t hi = current.upper(col);
          // Explore the up branch first; the down branch waits on the stack.
          stack.push_back({current, col, lo, down});
          current.set_bounds(col, down + 1, hi);
          continue;
        }
      }
      have_node = false;
      while (!stack.empty()) {
        Pending p = std::move(stack.back());
        stack.pop_back();
        current = std::move(p.lp);
        current.set_bounds(p.column, p.lo, p.hi);
        have_node = true;
        break;
      }
    }
    stats.pivots = options.max_pivots - pivot_budget;
    if (!have_incumbent) throw SolverError(SolverErrorKind::Infeasible, "model has no integer solution");
    return {incumbent, best, stats};
  }
};

template <class N>
Solution solve_with(const Model& model, const SolveOptions& options) {
  BranchAndBound<N> bb(model, options);
  return bb.run();
}

template <class N>
LpBound relaxation_with(const Model& model) {
  std::vector<int> column_of;
  auto setup = presolve<N>(model, column_of);
  DualSimplex<N> lp(setup);
  std::int64_t budget = SolveOptions{}.max_pivots;
  if (lp.run(budget) == DualSimplex<N>::Status::Infeasible)
    throw SolverError(SolverErrorKind::Infeasible, "LP relaxation is infeasible");
  return to_bound(lp.objective());
}

}  // namespace

Solution solve(const Model& model, const SolveOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  Solution sol;
  try {
    sol = solve_with<Rational>(model, options);
  } catch (const RationalOverflow&) {
    sol = solve_with<mpq_class>(model, options);
    sol.stats.bignum_fallback = true;
  }
  sol.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return sol;
}

LpBound solve_relaxation(const Model& model) {
  try {
    return relaxation_with<Rational>(model);
  } catch (const RationalOverflow&) {
    return relaxation_with<mpq_class>(model);
  }
}

}  // namespace dagrta::milp
