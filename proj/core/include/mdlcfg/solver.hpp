#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdlcfg/constraints.hpp"
#include "mdlcfg/term.hpp"

namespace mdlcfg {

struct SolverConfig {
  int max_rounds = 64;     // term bound fixed-point limit
  bool prefer_true = true; // greedy lexicographic true-maximization
  /// Hard Boolean commitments applied before the greedy pass.
  std::map<std::string, bool> pinned;
};

/// Assignment of Boolean values and ground terms covering a constraint set.
struct Solution {
  std::map<std::string, bool> booleans;
  std::map<std::string, Term> terms;
};

struct Verdict {
  enum class Kind { Sat, Unsat, Diverged };
  Kind kind = Kind::Unsat;
  Solution solution;                  // Sat only
  std::vector<std::string> failures;  // Unsat: failing constraint origins
  int rounds = 0;                     // Diverged: rounds spent

  bool sat() const { return kind == Kind::Sat; }
};

/// Solves the constraint satisfaction problem: finds Boolean values and
/// ground terms such that every constraint holds under substitution.
///
/// The algorithm abstracts guard placement into a Boolean formula, decides it
/// with an embedded SAT procedure (assuming variables true in lexicographic
/// order when prefer_true is set), then propagates term bounds to a fixed
/// point: lower bounds combine with join, upper bounds with meet, tail
/// variables accumulate provision/requirement elements. Candidate solutions
/// that fail verification block their Boolean assignment and the loop
/// repeats. Every Sat verdict passes verify.
Verdict solve(const ConstraintSet& cs, const SolverConfig& cfg = {});

/// Grounds both sides of every constraint and checks seniority; returns the
/// origins of all failing constraints (empty means the solution is valid).
/// Throws MdlError when the solution leaves a variable uncovered.
std::vector<std::string> verify(const ConstraintSet& cs, const Solution& s);

/// Enumeration bounds for the brute-force oracle.
struct BruteUniverse {
  int max_depth = 1;
  std::vector<std::string> labels = {"a", "b"};
  std::vector<std::string> symbols = {"int", "string"};
  size_t max_terms = 200000;
};

/// All ground terms over the universe: symbols, and records/choices whose
/// element payloads are terms of smaller depth. Deterministic order.
std::vector<Term> enumerate_ground_terms(const BruteUniverse& u);

/// Exhaustive reference solver: tries every Boolean assignment and every
/// term assignment drawn from the universe. Requires at most 10 Boolean
/// variables. Sat iff some assignment passes verify.
Verdict brute_solve(const ConstraintSet& cs, const BruteUniverse& u);

std::string render_solution(const Solution& s);
Solution parse_solution(const std::string& text);

}  // namespace mdlcfg
