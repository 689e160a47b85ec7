#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mdlcfg {

/// Base error for all MDL processing failures.
struct MdlError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Guard expression over named Boolean variables.
struct BoolExpr {
  enum class Kind { True, False, Var, Not, And, Or };

  Kind kind = Kind::True;
  std::string var;             // Kind::Var only
  std::vector<BoolExpr> args;  // 1 for Not, 2 for And/Or

  static BoolExpr constant(bool value);
  static BoolExpr variable(std::string name);
  static BoolExpr negation(BoolExpr e);
  static BoolExpr conjunction(BoolExpr a, BoolExpr b);
  static BoolExpr disjunction(BoolExpr a, BoolExpr b);

  bool is_const() const { return kind == Kind::True || kind == Kind::False; }
  bool is_const(bool value) const;

  /// Evaluates under a total assignment; throws MdlError on an unbound variable.
  bool evaluate(const std::map<std::string, bool>& env) const;
  void collect_vars(std::set<std::string>& out) const;

  bool operator==(const BoolExpr& other) const;
  bool operator!=(const BoolExpr& other) const { return !(*this == other); }
};

struct Element;

/// MDL term: symbol, term variable, record or choice.
///
/// Elements are stored in source order; equality and printing are
/// label-sorted, so two terms that differ only in element order compare equal.
struct Term {
  enum class Kind { Symbol, Var, Record, Choice };

  Kind kind = Kind::Record;
  std::string name;                 // Symbol / Var
  std::vector<Element> elements;    // Record / Choice
  std::optional<std::string> tail;  // Record / Choice

  static Term symbol(std::string n);
  static Term var(std::string n);
  static Term record(std::vector<Element> es, std::optional<std::string> t = {});
  static Term choice(std::vector<Element> es, std::optional<std::string> t = {});
  static Term nil();

  bool is_collection() const { return kind == Kind::Record || kind == Kind::Choice; }
  bool is_nil() const;
  bool is_ground() const;

  /// Finds an element by label; nullptr when absent.
  const Element* find(const std::string& label) const;

  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
};

struct Element {
  std::string label;
  BoolExpr guard;  // omitted guard == constant true
  Term term;
};

/// Assignment of Boolean values to guard variables and ground terms to term
/// variables.
struct Substitution {
  std::map<std::string, bool> booleans;
  std::map<std::string, Term> terms;
};

struct FreeVars {
  std::set<std::string> term_vars;
  std::set<std::string> bool_vars;
};

/// All term-variable names (including tails) and guard-variable names,
/// transitively.
FreeVars free_vars(const Term& t);

/// Elements of a collection ordered by label.
std::vector<const Element*> sorted_elements(const Term& t);

/// Fully grounds a term: evaluates guards and deletes false elements, splices
/// tail assignments into the enclosing collection and replaces remaining
/// variables. The substitution must cover every free variable of t.
///
/// Throws MdlError on an uncovered variable, a tail assigned a term of the
/// wrong kind, or a label collision between explicit and spliced elements.
Term ground(const Term& t, const Substitution& s);

/// Like ground but tolerates uncovered variables: covered guards are
/// evaluated, covered variables substituted, the rest left in place.
Term apply_partial(const Term& t, const Substitution& s);

/// Renames term and Boolean variables throughout; names absent from the maps
/// are kept.
Term rename_vars(const Term& t, const std::map<std::string, std::string>& term_map,
                 const std::map<std::string, std::string>& bool_map);

}  // namespace mdlcfg
