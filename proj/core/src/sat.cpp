#include "mdlcfg/sat.hpp"

#include <algorithm>

namespace mdlcfg {

namespace {
constexpr int kVarShift = 1;
inline int lit_var(int lit) { return lit >> kVarShift; }
inline bool lit_neg(int lit) { return lit & 1; }
inline int mk_lit(int var, bool neg) { return (var << kVarShift) | (neg ? 1 : 0); }
inline int lit_not(int lit) { return lit ^ 1; }
}  // namespace

int SatSolver::var_of(const std::string& name) {
  auto it = var_index_.find(name);
  if (it != var_index_.end()) return it->second;
  int idx = static_cast<int>(var_names_.size());
  var_index_.emplace(name, idx);
  var_names_.push_back(name);
  return idx;
}

int SatSolver::fresh_aux() {
  int idx = static_cast<int>(var_names_.size());
  var_names_.push_back("");
  return idx;
}

void SatSolver::register_var(const std::string& name) { var_of(name); }

void SatSolver::add_clause(std::vector<Lit> lits, const std::string& origin) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (size_t i = 0; i + 1 < lits.size(); ++i)
    if (lit_var(lits[i]) == lit_var(lits[i + 1])) return;  // tautology
  clauses_.push_back(std::move(lits));
  clause_origin_.push_back(origin);
}

// Tseitin encoding: returns a literal equivalent to f.
SatSolver::Lit SatSolver::encode(const BoolExpr& f, const std::string& origin) {
  switch (f.kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False: {
      // Dedicated variable pinned true by a unit clause on first use.
      bool fresh = !var_index_.count("\x01true");
      int v = var_of("\x01true");
      if (fresh) add_clause({mk_lit(v, false)}, "constant");
      return mk_lit(v, f.kind == BoolExpr::Kind::False);
    }
    case BoolExpr::Kind::Var:
      return mk_lit(var_of(f.var), false);
    case BoolExpr::Kind::Not:
      return lit_not(encode(f.args[0], origin));
    case BoolExpr::Kind::And: {
      Lit a = encode(f.args[0], origin);
      Lit b = encode(f.args[1], origin);
      int v = fresh_aux();
      Lit out = mk_lit(v, false);
      add_clause({lit_not(out), a}, origin);
      add_clause({lit_not(out), b}, origin);
      add_clause({out, lit_not(a), lit_not(b)}, origin);
      return out;
    }
    case BoolExpr::Kind::Or: {
      Lit a = encode(f.args[0], origin);
      Lit b = encode(f.args[1], origin);
      int v = fresh_aux();
      Lit out = mk_lit(v, false);
      add_clause({lit_not(out), a, b}, origin);
      add_clause({out, lit_not(a)}, origin);
      add_clause({out, lit_not(b)}, origin);
      return out;
    }
  }
  throw MdlError("corrupt Boolean expression");
}

void SatSolver::add_formula(const BoolExpr& f, const std::string& origin) {
  add_clause({encode(f, origin)}, origin);
}

void SatSolver::block_assignment(const std::map<std::string, bool>& assignment) {
  std::vector<Lit> lits;
  for (const auto& [name, value] : assignment)
    lits.push_back(mk_lit(var_of(name), value));  // negation of the assignment
  add_clause(std::move(lits), "blocked assignment");
}

std::optional<std::map<std::string, bool>> SatSolver::solve(
    const std::vector<std::pair<std::string, bool>>& assumptions,
    bool default_polarity) {
  conflict_origins_.clear();
  for (const auto& a : assumptions) var_of(a.first);
  const int n = static_cast<int>(var_names_.size());
  // 0 = unassigned, 1 = true, -1 = false
  std::vector<int> value(n, 0);
  std::vector<int> trail;
  std::vector<size_t> decision_marks;
  std::vector<bool> decision_flip_tried;

  auto assign = [&](int var, bool val) {
    value[var] = val ? 1 : -1;
    trail.push_back(var);
  };

  // Returns false on conflict; runs unit propagation to fixpoint.
  auto propagate = [&]() -> bool {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t ci = 0; ci < clauses_.size(); ++ci) {
        const auto& c = clauses_[ci];
        int unassigned = -1;
        int count_unassigned = 0;
        bool satisfied = false;
        for (Lit lit : c) {
          int v = value[lit_var(lit)];
          if (v == 0) {
            ++count_unassigned;
            unassigned = lit;
          } else if ((v == 1) != lit_neg(lit)) {
            satisfied = true;
            break;
          }
        }
        if (satisfied) continue;
        if (count_unassigned == 0) {
          conflict_origins_.insert(clause_origin_[ci]);
          return false;
        }
        if (count_unassigned == 1) {
          assign(lit_var(unassigned), !lit_neg(unassigned));
          changed = true;
        }
      }
    }
    return true;
  };

  auto backtrack_to = [&](size_t mark) {
    while (trail.size() > mark) {
      value[trail.back()] = 0;
      trail.pop_back();
    }
  };

  // Assumptions become forced units; a conflict under them is final.
  for (const auto& [name, val] : assumptions) {
    int var = var_of(name);
    if (value[var] != 0) {
      if ((value[var] == 1) != val) return std::nullopt;
      continue;
    }
    assign(var, val);
    if (!propagate()) return std::nullopt;
  }

  if (!propagate()) return std::nullopt;

  // Chronological backtracking DPLL over the remaining variables.
  while (true) {
    int branch_var = -1;
    for (int v = 0; v < n; ++v)
      if (value[v] == 0) {
        branch_var = v;
        break;
      }
    if (branch_var < 0) break;  // full assignment

    decision_marks.push_back(trail.size());
    decision_flip_tried.push_back(false);
    assign(branch_var, default_polarity);

    while (!propagate()) {
      // Unwind to the most recent decision with an untried phase.
      while (!decision_marks.empty() && decision_flip_tried.back()) {
        backtrack_to(decision_marks.back());
        decision_marks.pop_back();
        decision_flip_tried.pop_back();
      }
      if (decision_marks.empty()) return std::nullopt;
      size_t mark = decision_marks.back();
      int var = trail[mark];
      bool old = value[var] == 1;
      backtrack_to(mark);
      decision_flip_tried.back() = true;
      assign(var, !old);
    }
  }

  std::map<std::string, bool> model;
  for (const auto& [name, idx] : var_index_) {
    if (name.empty() || name[0] == '\x01') continue;
    model[name] = value[idx] == 0 ? default_polarity : value[idx] == 1;
  }
  return model;
}

}  // namespace mdlcfg
