#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mdlcfg/term.hpp"

namespace mdlcfg {

/// Small CNF SAT solver: DPLL with unit propagation and assumption literals.
///
/// Arbitrary guard formulas are Tseitin-encoded on the fly; auxiliary
/// variables stay internal and never appear in reported models.
class SatSolver {
 public:
  /// Asserts a formula; origin is kept for diagnostics on conflicts.
  void add_formula(const BoolExpr& f, const std::string& origin);

  /// Forbids a full assignment over the given variables.
  void block_assignment(const std::map<std::string, bool>& assignment);

  /// Ensures a variable exists even if no formula mentions it.
  void register_var(const std::string& name);

  /// Satisfying assignment over all registered problem variables, or nullopt.
  /// Assumptions are unit-asserted for this call only. Unassigned problem
  /// variables in the model default to default_polarity.
  std::optional<std::map<std::string, bool>> solve(
      const std::vector<std::pair<std::string, bool>>& assumptions = {},
      bool default_polarity = true);

  /// Origins of clauses involved in conflicts during the last unsatisfiable
  /// solve call.
  const std::set<std::string>& conflict_origins() const { return conflict_origins_; }

 private:
  using Lit = int;  // var index << 1 | sign (1 = negated)

  int var_of(const std::string& name);
  int fresh_aux();
  Lit encode(const BoolExpr& f, const std::string& origin);
  void add_clause(std::vector<Lit> lits, const std::string& origin);

  std::map<std::string, int> var_index_;
  std::vector<std::string> var_names_;  // aux vars hold ""
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::string> clause_origin_;
  std::set<std::string> conflict_origins_;
};

}  // namespace mdlcfg
