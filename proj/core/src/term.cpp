#include "mdlcfg/term.hpp"

#include <algorithm>

namespace mdlcfg {

BoolExpr BoolExpr::constant(bool value) {
  BoolExpr e;
  e.kind = value ? Kind::True : Kind::False;
  return e;
}

BoolExpr BoolExpr::variable(std::string name) {
  BoolExpr e;
  e.kind = Kind::Var;
  e.var = std::move(name);
  return e;
}

BoolExpr BoolExpr::negation(BoolExpr e) {
  BoolExpr r;
  r.kind = Kind::Not;
  r.args.push_back(std::move(e));
  return r;
}

BoolExpr BoolExpr::conjunction(BoolExpr a, BoolExpr b) {
  BoolExpr r;
  r.kind = Kind::And;
  r.args.push_back(std::move(a));
  r.args.push_back(std::move(b));
  return r;
}

BoolExpr BoolExpr::disjunction(BoolExpr a, BoolExpr b) {
  BoolExpr r;
  r.kind = Kind::Or;
  r.args.push_back(std::move(a));
  r.args.push_back(std::move(b));
  return r;
}

bool BoolExpr::is_const(bool value) const {
  return kind == (value ? Kind::True : Kind::False);
}

bool BoolExpr::evaluate(const std::map<std::string, bool>& env) const {
  switch (kind) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Var: {
      auto it = env.find(var);
      if (it == env.end()) throw MdlError("unbound Boolean variable: " + var);
      return it->second;
    }
    case Kind::Not:
      return !args[0].evaluate(env);
    case Kind::And:
      return args[0].evaluate(env) && args[1].evaluate(env);
    case Kind::Or:
      return args[0].evaluate(env) || args[1].evaluate(env);
  }
  throw MdlError("corrupt Boolean expression");
}

void BoolExpr::collect_vars(std::set<std::string>& out) const {
  if (kind == Kind::Var) out.insert(var);
  for (const auto& a : args) a.collect_vars(out);
}

bool BoolExpr::operator==(const BoolExpr& other) const {
  if (kind != other.kind || var != other.var) return false;
  if (args.size() != other.args.size()) return false;
  for (size_t i = 0; i < args.size(); ++i)
    if (!(args[i] == other.args[i])) return false;
  return true;
}

Term Term::symbol(std::string n) {
  Term t;
  t.kind = Kind::Symbol;
  t.name = std::move(n);
  return t;
}

Term Term::var(std::string n) {
  Term t;
  t.kind = Kind::Var;
  t.name = std::move(n);
  return t;
}

Term Term::record(std::vector<Element> es, std::optional<std::string> t) {
  Term r;
  r.kind = Kind::Record;
  r.elements = std::move(es);
  r.tail = std::move(t);
  return r;
}

Term Term::choice(std::vector<Element> es, std::optional<std::string> t) {
  Term r;
  r.kind = Kind::Choice;
  r.elements = std::move(es);
  r.tail = std::move(t);
  return r;
}

Term Term::nil() { return record({}); }

bool Term::is_nil() const {
  return kind == Kind::Record && elements.empty() && !tail;
}

bool Term::is_ground() const {
  switch (kind) {
    case Kind::Symbol:
      return true;
    case Kind::Var:
      return false;
    case Kind::Record:
    case Kind::Choice:
      if (tail) return false;
      for (const auto& e : elements) {
        if (!e.guard.is_const()) return false;
        if (!e.term.is_ground()) return false;
      }
      return true;
  }
  return false;
}

const Element* Term::find(const std::string& label) const {
  for (const auto& e : elements)
    if (e.label == label) return &e;
  return nullptr;
}

std::vector<const Element*> sorted_elements(const Term& t) {
  std::vector<const Element*> es;
  es.reserve(t.elements.size());
  for (const auto& e : t.elements) es.push_back(&e);
  std::sort(es.begin(), es.end(),
            [](const Element* a, const Element* b) { return a->label < b->label; });
  return es;
}

bool Term::operator==(const Term& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case Kind::Symbol:
    case Kind::Var:
      return name == other.name;
    case Kind::Record:
    case Kind::Choice: {
      if (tail != other.tail) return false;
      if (elements.size() != other.elements.size()) return false;
      auto a = sorted_elements(*this);
      auto b = sorted_elements(other);
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i]->label != b[i]->label) return false;
        if (!(a[i]->guard == b[i]->guard)) return false;
        if (!(a[i]->term == b[i]->term)) return false;
      }
      return true;
    }
  }
  return false;
}

static void free_vars_rec(const Term& t, FreeVars& out) {
  switch (t.kind) {
    case Term::Kind::Symbol:
      return;
    case Term::Kind::Var:
      out.term_vars.insert(t.name);
      return;
    case Term::Kind::Record:
    case Term::Kind::Choice:
      for (const auto& e : t.elements) {
        e.guard.collect_vars(out.bool_vars);
        free_vars_rec(e.term, out);
      }
      if (t.tail) out.term_vars.insert(*t.tail);
      return;
  }
}

FreeVars free_vars(const Term& t) {
  FreeVars fv;
  free_vars_rec(t, fv);
  return fv;
}

namespace {

// Guard evaluation that tolerates unbound variables in non-strict mode.
std::optional<bool> try_evaluate(const BoolExpr& g,
                                 const std::map<std::string, bool>& env) {
  std::set<std::string> vars;
  g.collect_vars(vars);
  for (const auto& v : vars)
    if (!env.count(v)) return std::nullopt;
  return g.evaluate(env);
}

Term substitute(const Term& t, const Substitution& s, bool strict) {
  switch (t.kind) {
    case Term::Kind::Symbol:
      return t;
    case Term::Kind::Var: {
      auto it = s.terms.find(t.name);
      if (it != s.terms.end()) return substitute(it->second, s, strict);
      if (strict) throw MdlError("uncovered term variable: $" + t.name);
      return t;
    }
    case Term::Kind::Record:
    case Term::Kind::Choice: {
      Term out;
      out.kind = t.kind;
      for (const auto& e : t.elements) {
        auto val = try_evaluate(e.guard, s.booleans);
        if (!val) {
          if (strict)
            throw MdlError("uncovered Boolean variable in guard of element '" +
                           e.label + "'");
          out.elements.push_back({e.label, e.guard, substitute(e.term, s, strict)});
          continue;
        }
        if (!*val) continue;  // element removed
        out.elements.push_back(
            {e.label, BoolExpr::constant(true), substitute(e.term, s, strict)});
      }
      if (t.tail) {
        auto it = s.terms.find(*t.tail);
        if (it == s.terms.end()) {
          if (strict) throw MdlError("uncovered term variable: $" + *t.tail);
          out.tail = t.tail;
        } else {
          Term tv = substitute(it->second, s, strict);
          if (tv.kind != t.kind)
            throw MdlError("tail variable $" + *t.tail + " assigned a " +
                           (tv.kind == Term::Kind::Record
                                ? std::string("record")
                                : tv.kind == Term::Kind::Choice
                                      ? std::string("choice")
                                      : std::string("non-collection")) +
                           " where a " +
                           (t.kind == Term::Kind::Record ? "record" : "choice") +
                           " is required");
          for (const auto& e : tv.elements) {
            if (out.find(e.label))
              throw MdlError("label collision on '" + e.label +
                             "' when splicing tail $" + *t.tail);
            out.elements.push_back(e);
          }
          if (tv.tail) out.tail = tv.tail;
        }
      }
      return out;
    }
  }
  throw MdlError("corrupt term");
}

}  // namespace

Term ground(const Term& t, const Substitution& s) {
  return substitute(t, s, true);
}

Term apply_partial(const Term& t, const Substitution& s) {
  return substitute(t, s, false);
}

static BoolExpr rename_guard(const BoolExpr& g,
                             const std::map<std::string, std::string>& bool_map) {
  BoolExpr out = g;
  if (out.kind == BoolExpr::Kind::Var) {
    auto it = bool_map.find(out.var);
    if (it != bool_map.end()) out.var = it->second;
  }
  for (auto& a : out.args) a = rename_guard(a, bool_map);
  return out;
}

Term rename_vars(const Term& t, const std::map<std::string, std::string>& term_map,
                 const std::map<std::string, std::string>& bool_map) {
  Term out = t;
  switch (t.kind) {
    case Term::Kind::Symbol:
      return out;
    case Term::Kind::Var: {
      auto it = term_map.find(t.name);
      if (it != term_map.end()) out.name = it->second;
      return out;
    }
    case Term::Kind::Record:
    case Term::Kind::Choice: {
      for (auto& e : out.elements) {
        e.guard = rename_guard(e.guard, bool_map);
        e.term = rename_vars(e.term, term_map, bool_map);
      }
      if (out.tail) {
        auto it = term_map.find(*out.tail);
        if (it != term_map.end()) out.tail = it->second;
      }
      return out;
    }
  }
  return out;
}

}  // namespace mdlcfg
