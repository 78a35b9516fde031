#include <sstream>

#include "dagrta/milp.hpp"

namespace dagrta::milp {

namespace {

void write_terms(std::ostringstream& os, const std::vector<Term>& terms, const Model& model) {
  int on_line = 0;
  for (const Term& t : terms) {
    if (on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
    os << (t.coef < 0 ? " - " : " + ") << (t.coef < 0 ? -t.coef : t.coef) << ' '
       << model.variables()[static_cast<std::size_t>(t.var)].name;
    ++on_line;
  }
  if (terms.empty()) os << " 0 " << (model.variables().empty() ? "" : model.variables()[0].name);
}

const char* lp_sense(Sense s) {
  switch (s) {
    case Sense::LessEqual: return "<=";
    case Sense::GreaterEqual: return ">=";
    case Sense::Equal: return "=";
  }
  return "=";
}

}  // namespace

std::string write_lp(const Model& model) {
  std::ostringstream os;
  os << "\\ carry-out workload model\n";
  os << "Maximize\n " << model.objective_name << ':';
  write_terms(os, model.objective(), model);
  os << "\nSubject To\n";
  for (const Row& r : model.rows()) {
    os << ' ' << r.name << ':';
    write_terms(os, r.terms, model);
    os << ' ' << lp_sense(r.sense) << ' ' << r.rhs << '\n';
  }
  os << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (v.binary && v.lower == 0 && v.upper == 1) continue;
    if (v.lower == v.upper) {
      os << ' ' << v.name << " = " << v.lower << '\n';
    } else {
      os << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
    }
  }
  os << "Generals\n";
  int on_line = 0;
  for (const Variable& v : model.variables()) {
    if (v.binary) continue;
    os << ' ' << v.name;
    if (++on_line == 10) {
      os << '\n';
      on_line = 0;
    }
  }
  if (on_line) os << '\n';
  os << "Binaries\n";
  on_line = 0;
  for (const Variable& v : model.variables()) {
    if (!v.binary) continue;
    os << ' ' << v.name;
    if (++on_line == 10) {
      os << '\n';
      on_line = 0;
    }
  }
  if (on_line) os << '\n';
  os << "End\n";
  return os.str();
}

std::string write_mps(const Model& model) {
  std::ostringstream os;
  os << "NAME carryout\nOBJSENSE\n    MAX\nROWS\n N  " << model.objective_name << '\n';
  for (const Row& r : model.rows()) {
    const char* s = r.sense == Sense::LessEqual ? "L" : r.sense == Sense::GreaterEqual ? "G" : "E";
    os << ' ' << s << "  " << r.name << '\n';
  }
  // Column-major coefficient listing.
  const auto& vars = model.variables();
  std::vector<std::vector<std::pair<std::string, std::int64_t>>> cols(vars.size());
  for (const Term& t : model.objective())
    cols[static_cast<std::size_t>(t.var)].emplace_back(model.objective_name, t.coef);
  for (const Row& r : model.rows())
    for (const Term& t : r.terms) cols[static_cast<std::size_t>(t.var)].emplace_back(r.name, t.coef);
  os << "COLUMNS\n    MARKER  'MARKER'  'INTORG'\n";
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (cols[v].empty()) os << "    " << vars[v].name << "  " << model.objective_name << "  0\n";
    for (const auto& [row, coef] : cols[v]) os << "    " << vars[v].name << "  " << row << "  " << coef << '\n';
  }
  os << "    MARKER  'MARKER'  'INTEND'\nRHS\n";
  for (const Row& r : model.rows())
    if (r.rhs != 0) os << "    RHS  " << r.name << "  " << r.rhs << '\n';
  os << "BOUNDS\n";
  for (const Variable& v : vars) {
    if (v.binary && v.lower == 0 && v.upper == 1) {
      os << " BV BND  " << v.name << '\n';
    } else if (v.lower == v.upper) {
      os << " FX BND  " << v.name << "  " << v.lower << '\n';
    } else {
      os << " LO BND  " << v.name << "  " << v.lower << '\n';
      os << " UP BND  " << v.name << "  " << v.upper << '\n';
    }
  }
  os << "ENDATA\n";
  return os.str();
}

}  // namespace dagrta::milp
