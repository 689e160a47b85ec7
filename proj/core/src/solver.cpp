#include "mdlcfg/solver.hpp"

#include <algorithm>
#include <sstream>

#include "mdlcfg/parser.hpp"
#include "mdlcfg/sat.hpp"
#include "mdlcfg/seniority.hpp"

namespace mdlcfg {

namespace {

// Constant-folding connective helpers for abstraction formulas.
BoolExpr b_not(BoolExpr e) {
  if (e.is_const(true)) return BoolExpr::constant(false);
  if (e.is_const(false)) return BoolExpr::constant(true);
  return BoolExpr::negation(std::move(e));
}

BoolExpr b_and(BoolExpr a, BoolExpr b) {
  if (a.is_const(true)) return b;
  if (b.is_const(true)) return a;
  if (a.is_const(false) || b.is_const(false)) return BoolExpr::constant(false);
  return BoolExpr::conjunction(std::move(a), std::move(b));
}

BoolExpr b_or(BoolExpr a, BoolExpr b) {
  if (a.is_const(false)) return b;
  if (b.is_const(false)) return a;
  if (a.is_const(true) || b.is_const(true)) return BoolExpr::constant(true);
  return BoolExpr::disjunction(std::move(a), std::move(b));
}

BoolExpr b_implies(BoolExpr a, BoolExpr b) { return b_or(b_not(std::move(a)), std::move(b)); }

size_t term_size(const Term& t) {
  size_t n = 1;
  for (const auto& e : t.elements) n += term_size(e.term);
  return n;
}

// ---------------------------------------------------------------------------
// Tail kind inference: a record tail must be assigned a record, a choice tail
// a choice. A variable used in both positions admits no assignment.

void scan_tail_kinds(const Term& t, std::map<std::string, Term::Kind>& kinds,
                     std::set<std::string>& conflicts) {
  if (!t.is_collection()) return;
  if (t.tail) {
    auto [it, inserted] = kinds.emplace(*t.tail, t.kind);
    if (!inserted && it->second != t.kind) conflicts.insert(*t.tail);
  }
  for (const auto& e : t.elements) scan_tail_kinds(e.term, kinds, conflicts);
}

// ---------------------------------------------------------------------------
// Boolean abstraction: necessary placement conditions for guarded elements.
// Cases a tail variable could repair are left to the refinement loop.

void abstract_constraint(const Term& junior, const Term& senior, const BoolExpr& cond,
                         const std::string& origin, SatSolver& sat) {
  if (junior.kind == Term::Kind::Var || senior.kind == Term::Kind::Var) return;

  const bool senior_nil = senior.kind == Term::Kind::Record &&
                          senior.elements.empty() && !senior.tail;
  if (senior_nil) {
    if (junior.kind == Term::Kind::Choice)
      sat.add_formula(b_not(cond), origin);
    return;
  }

  if (junior.kind == Term::Kind::Symbol) {
    if (senior.kind == Term::Kind::Symbol) {
      if (junior.name != senior.name) sat.add_formula(b_not(cond), origin);
      return;
    }
    if (senior.kind == Term::Kind::Record) {
      // A symbol is junior to a record only when the record grounds to nil.
      for (const auto& e : senior.elements)
        sat.add_formula(b_not(b_and(cond, e.guard)), origin);
      return;
    }
    sat.add_formula(b_not(cond), origin);
    return;
  }

  if (junior.kind == Term::Kind::Record) {
    if (senior.kind != Term::Kind::Record) {
      sat.add_formula(b_not(cond), origin);
      return;
    }
    for (const auto& se : senior.elements) {
      const Element* je = junior.find(se.label);
      if (je) {
        if (!junior.tail)
          sat.add_formula(b_implies(b_and(cond, se.guard), je->guard), origin);
        abstract_constraint(je->term, se.term, b_and(cond, b_and(je->guard, se.guard)),
                            origin, sat);
      } else if (!junior.tail) {
        sat.add_formula(b_not(b_and(cond, se.guard)), origin);
      }
    }
    return;
  }

  // junior choice
  if (senior.kind != Term::Kind::Choice) {
    sat.add_formula(b_not(cond), origin);
    return;
  }
  for (const auto& je : junior.elements) {
    const Element* se = senior.find(je.label);
    if (se) {
      if (!senior.tail)
        sat.add_formula(b_implies(b_and(cond, je.guard), se->guard), origin);
      abstract_constraint(je.term, se->term, b_and(cond, b_and(je.guard, se->guard)),
                          origin, sat);
    } else if (!senior.tail) {
      sat.add_formula(b_not(b_and(cond, je.guard)), origin);
    }
  }
}

// ---------------------------------------------------------------------------
// Term stage: bound propagation to a fixed point under a fixed Boolean
// assignment. Specialized terms carry no guards (false elements deleted).

struct TermStage {
  enum class Status { Ok, Infeasible, Diverged };
  Status status = Status::Ok;
  std::map<std::string, Term> assignment;
  std::set<std::string> origins;  // contributing origins on infeasibility
  int rounds = 0;
};

class TermSolver {
 public:
  TermSolver(const ConstraintSet& cs, const std::map<std::string, bool>& booleans,
             const std::map<std::string, Term::Kind>& tail_kinds, int max_rounds,
             bool weaken = false)
      : cs_(cs), tail_kinds_(tail_kinds), max_rounds_(max_rounds), weaken_(weaken) {
    Substitution beta;
    beta.booleans = booleans;
    for (const auto& c : cs.constraints)
      specialized_.push_back(
          {apply_partial(c.junior, beta), apply_partial(c.senior, beta), c.origin});
    // Splicing a tail next to explicit elements requires disjoint labels, so
    // every tail variable must avoid its siblings' labels no matter what the
    // bounds otherwise suggest.
    for (const auto& c : specialized_) {
      collect_exclusions(c.junior);
      collect_exclusions(c.senior);
    }
  }

  TermStage run() {
    TermStage out;
    for (int round = 1; round <= max_rounds_; ++round) {
      out.rounds = round;
      lower_.clear();
      upper_.clear();
      edges_.clear();
      infeasible_ = false;
      origins_.clear();
      violations_.clear();

      for (const auto& c : specialized_) {
        origin_ = &c.origin;
        decompose(c.junior, c.senior);
        if (infeasible_) break;
      }
      if (!infeasible_) close_edges();
      std::map<std::string, Term> next;
      if (!infeasible_) next = assign();
      if (infeasible_) {
        out.status = TermStage::Status::Infeasible;
        out.origins = origins_;
        return out;
      }
      if (next == sigma_) {
        // Fixpoint. Bound violations that survive a stable round are real.
        if (violations_.empty()) {
          out.status = TermStage::Status::Ok;
          out.assignment = sigma_;
        } else {
          out.status = TermStage::Status::Infeasible;
          out.origins = violations_;
        }
        return out;
      }
      // Self-referential bounds can grow without stabilizing; cut early.
      size_t total = 0;
      for (const auto& [v, t] : next) total += term_size(t);
      if (total > 50000) break;
      sigma_ = std::move(next);
    }
    if (!violations_.empty()) {
      // The assignment kept violating its bounds until the round budget ran
      // out; treat the recurring conflict as the cause.
      out.status = TermStage::Status::Infeasible;
      out.origins = violations_;
      return out;
    }
    out.status = TermStage::Status::Diverged;
    return out;
  }

 private:
  void fail() {
    infeasible_ = true;
    if (origin_) origins_.insert(*origin_);
  }

  std::optional<Term> resolve(const Term& t) {
    if (t.is_ground()) return t;
    Substitution s;
    s.terms = sigma_;
    try {
      Term r = apply_partial(t, s);
      if (!r.is_ground()) return std::nullopt;  // unresolved this round
      return r;
    } catch (const MdlError&) {
      fail();  // splice kind mismatch or label collision
      return std::nullopt;
    }
  }

  void touch(const std::string& var) { var_origins_[var].insert(*origin_); }

  void collect_exclusions(const Term& t) {
    if (t.tail)
      for (const auto& e : t.elements) excluded_[*t.tail].insert(e.label);
    for (const auto& e : t.elements) collect_exclusions(e.term);
  }

  void add_lower(const std::string& var, const Term& t) {
    touch(var);
    auto it = lower_.find(var);
    if (it == lower_.end()) {
      lower_.emplace(var, t);
      return;
    }
    auto j = join(it->second, t);
    if (!j) {
      fail();
      return;
    }
    it->second = *j;
  }

  void add_upper(const std::string& var, const Term& t) {
    touch(var);
    auto it = upper_.find(var);
    if (it == upper_.end()) {
      upper_.emplace(var, t);
      return;
    }
    auto m = meet(it->second, t);
    if (!m) {
      fail();
      return;
    }
    it->second = *m;
  }

  bool kind_compatible(const std::string& var, const Term& t) const {
    auto kind = tail_kinds_.find(var);
    return kind == tail_kinds_.end() || kind->second == t.kind;
  }

  void soft_upper(const std::string& var, const Term& t) {
    if (!kind_compatible(var, t)) return;
    auto it = upper_.find(var);
    if (it == upper_.end()) {
      upper_.emplace(var, t);
      return;
    }
    if (auto m = meet(it->second, t)) it->second = *m;
  }

  void soft_lower(const std::string& var, const Term& t) {
    if (!kind_compatible(var, t)) return;
    auto it = lower_.find(var);
    if (it == lower_.end()) {
      lower_.emplace(var, t);
      return;
    }
    if (auto j = join(it->second, t)) it->second = *j;
  }

  static Term singleton(Term::Kind kind, const std::string& label, Term payload) {
    Term t;
    t.kind = kind;
    t.elements.push_back({label, BoolExpr::constant(true), std::move(payload)});
    return t;
  }

  void decompose(const Term& junior, const Term& senior) {
    if (infeasible_) return;

    // Self-referential constraints ($v against a term mentioning $v) admit no
    // finite bound; the final verification decides them.
    if (junior.kind == Term::Kind::Var) {
      if (senior.kind == Term::Kind::Var) {
        if (junior.name == senior.name) return;  // reflexive
        edges_.emplace_back(junior.name, senior.name);
        touch(junior.name);
        touch(senior.name);
        return;
      }
      if (free_vars(senior).term_vars.count(junior.name)) return;
      if (senior.tail) {
        // Whatever the variable carries beyond the senior's explicit labels
        // has to come from the senior tail. Last round's value is a guess,
        // so the residue propagates tentatively.
        if (auto it = sigma_.find(junior.name);
            it != sigma_.end() && it->second.kind == senior.kind) {
          Term residue;
          residue.kind = senior.kind;
          for (const auto& e : it->second.elements)
            if (!senior.find(e.label)) residue.elements.push_back(e);
          soft_lower(*senior.tail, residue);
        }
      }
      if (auto rs = resolve(senior)) add_upper(junior.name, *rs);
      return;
    }
    if (senior.kind == Term::Kind::Var) {
      if (free_vars(junior).term_vars.count(senior.name)) return;
      if (junior.tail && junior.elements.empty()) {
        // A bare tail under a bare variable orders the two directly.
        if (*junior.tail != senior.name) {
          edges_.emplace_back(*junior.tail, senior.name);
          touch(*junior.tail);
          touch(senior.name);
        }
        return;
      }
      if (auto rj = resolve(junior)) add_lower(senior.name, *rj);
      return;
    }

    const bool senior_nil = senior.kind == Term::Kind::Record &&
                            senior.elements.empty() && !senior.tail;
    if (senior_nil) {
      if (junior.kind == Term::Kind::Choice) fail();
      return;  // symbols and records are junior to nil regardless of content
    }

    if (junior.kind == Term::Kind::Symbol) {
      if (senior.kind == Term::Kind::Symbol) {
        if (junior.name != senior.name) fail();
        return;
      }
      if (senior.kind == Term::Kind::Record && senior.elements.empty() && senior.tail) {
        add_lower(*senior.tail, Term::nil());  // tail must ground to nil
        return;
      }
      fail();
      return;
    }

    if (junior.kind == Term::Kind::Record) {
      if (senior.kind != Term::Kind::Record) {
        fail();
        return;
      }
      decompose_records(junior, senior);
      return;
    }

    // junior choice
    if (senior.kind != Term::Kind::Choice) {
      fail();
      return;
    }
    decompose_choices(junior, senior);
  }

  // Requires a label from the junior side: explicit element, requirement on
  // the junior record tail, or failure.
  void require_field(const Term& junior, const std::string& label, const Term& payload) {
    if (const Element* je = junior.find(label)) {
      decompose(je->term, payload);
      return;
    }
    if (junior.tail) {
      if (auto rp = resolve(payload))
        add_upper(*junior.tail, singleton(Term::Kind::Record, label, *rp));
      return;
    }
    fail();
  }

  void decompose_records(const Term& junior, const Term& senior) {
    for (const auto& se : senior.elements) {
      require_field(junior, se.label, se.term);
      if (infeasible_) return;
    }
    if (senior.tail) {
      // junior <= E ∪ v holds exactly when junior covers E and v is senior to
      // the junior restricted to the labels E does not claim.
      if (free_vars(junior).term_vars.count(*senior.tail)) return;  // self-splice
      if (junior.tail) {
        bool covered = true;
        for (const auto& je : junior.elements)
          if (!senior.find(je.label)) covered = false;
        if (covered) {
          // Everything outside the senior's explicit labels comes from the
          // junior tail, so the whole residue is a var-var ordering.
          edges_.emplace_back(*junior.tail, *senior.tail);
          touch(*junior.tail);
          touch(*senior.tail);
          return;
        }
      }
      auto rj = resolve(junior);
      if (!rj) return;  // settles in a later round
      Term bound = Term::nil();
      for (const auto& e : rj->elements)
        if (!senior.find(e.label)) bound.elements.push_back(e);
      add_lower(*senior.tail, bound);
    }
  }

  void decompose_choices(const Term& junior, const Term& senior) {
    for (const auto& je : junior.elements) {
      if (const Element* se = senior.find(je.label)) {
        decompose(je.term, se->term);
      } else if (senior.tail) {
        // Provision requirement: the senior tail must offer this element.
        if (auto rj = resolve(je.term))
          add_lower(*senior.tail, singleton(Term::Kind::Choice, je.label, *rj));
      } else {
        fail();
      }
      if (infeasible_) return;
    }

    if (!junior.tail) return;
    // Upper bound for the junior tail: whatever the senior side offers beyond
    // the junior's explicit labels.
    std::vector<Element> remainder;
    for (const auto& se : senior.elements) {
      if (junior.find(se.label)) continue;
      auto rp = resolve(se.term);
      if (!rp) return;  // unresolved; retry next round
      remainder.push_back({se.label, BoolExpr::constant(true), *rp});
    }
    if (senior.tail) {
      if (remainder.empty() && *junior.tail != *senior.tail) {
        // The senior offers nothing explicit beyond the junior's labels, so
        // the tails order directly.
        edges_.emplace_back(*junior.tail, *senior.tail);
        touch(*junior.tail);
        touch(*senior.tail);
        return;
      }
      auto it = sigma_.find(*senior.tail);
      if (it == sigma_.end()) return;
      for (const auto& e : it->second.elements) {
        if (senior.find(e.label)) {
          fail();
          return;
        }
        if (junior.find(e.label)) continue;
        remainder.push_back(e);
      }
    }
    Term bound;
    bound.kind = Term::Kind::Choice;
    bound.elements = std::move(remainder);
    add_upper(*junior.tail, bound);
  }

  void close_edges() {
    // var <= var: juniors inherit upper bounds, seniors inherit lower bounds.
    bool changed = true;
    int guard = static_cast<int>(edges_.size() * cs_.term_vars.size()) + 2;
    while (changed && !infeasible_ && guard-- > 0) {
      changed = false;
      for (const auto& [jv, sv] : edges_) {
        auto prev_upper = upper_.count(jv) ? std::optional<Term>(upper_.at(jv))
                                           : std::nullopt;
        auto prev_lower = lower_.count(sv) ? std::optional<Term>(lower_.at(sv))
                                           : std::nullopt;
        if (auto it = upper_.find(sv); it != upper_.end()) add_upper(jv, it->second);
        if (infeasible_) return;
        if (auto it = lower_.find(jv); it != lower_.end()) add_lower(sv, it->second);
        if (infeasible_) return;
        // Last round's assignments propagate tentatively: they are guesses,
        // so an incompatible one is ignored rather than fatal.
        if (auto it = sigma_.find(sv); it != sigma_.end()) soft_upper(jv, it->second);
        if (auto it = sigma_.find(jv); it != sigma_.end()) soft_lower(sv, it->second);
        if ((upper_.count(jv) ? std::optional<Term>(upper_.at(jv)) : std::nullopt) !=
            prev_upper)
          changed = true;
        if ((lower_.count(sv) ? std::optional<Term>(lower_.at(sv)) : std::nullopt) !=
            prev_lower)
          changed = true;
      }
    }
  }

  std::map<std::string, Term> assign() {
    std::map<std::string, Term> next;
    for (const auto& var : cs_.term_vars) {
      auto lo = lower_.find(var);
      auto hi = upper_.find(var);
      auto kind = tail_kinds_.find(var);
      bool choice_kinded =
          (kind != tail_kinds_.end() && kind->second == Term::Kind::Choice) ||
          (kind == tail_kinds_.end() && hi != upper_.end() &&
           hi->second.kind == Term::Kind::Choice);
      Term value;
      if (lo != lower_.end()) {
        value = lo->second;
        // A symbol lower bound under a record-kinded tail can still be
        // satisfied: nil is the only record senior to a symbol.
        if (kind != tail_kinds_.end() && kind->second == Term::Kind::Record &&
            value.kind == Term::Kind::Symbol)
          value = Term::nil();
      } else if (choice_kinded) {
        // The empty choice is junior to every choice, so it meets any upper
        // bound and is the most permissive pick.
        value = Term::choice({});
      } else if (hi != upper_.end()) {
        value = hi->second;
      } else {
        value = Term::nil();
      }
      // Weakened retry: nil is senior to every record and symbol, so it can
      // replace any bound-compatible candidate. The minimal join-of-lowers
      // sometimes collides with a splice the variable also participates in;
      // nil never does.
      if (weaken_ && !choice_kinded) {
        Term relaxed = Term::nil();
        if ((hi == upper_.end() || leq(relaxed, hi->second)) &&
            (lo == lower_.end() || leq(lo->second, relaxed)))
          value = std::move(relaxed);
      }
      if (auto ex = excluded_.find(var); ex != excluded_.end() &&
                                         value.kind != Term::Kind::Symbol) {
        std::erase_if(value.elements, [&](const Element& e) {
          return ex->second.count(e.label) != 0;
        });
      }
      bool feasible = true;
      if (lo != lower_.end() && !leq(lo->second, value)) feasible = false;
      if (hi != upper_.end() && !leq(value, hi->second)) feasible = false;
      if (kind != tail_kinds_.end() && value.kind != kind->second) feasible = false;
      if (!feasible) {
        // Keep the candidate: the conflicting bound may be a stale guess
        // that the next round revises. run() judges once sigma settles.
        violations_.insert(var_origins_[var].begin(), var_origins_[var].end());
      }
      next.emplace(var, std::move(value));
    }
    return next;
  }

  const ConstraintSet& cs_;
  const std::map<std::string, Term::Kind>& tail_kinds_;
  int max_rounds_;
  bool weaken_ = false;
  std::vector<Constraint> specialized_;

  std::map<std::string, Term> sigma_;
  std::map<std::string, Term> lower_, upper_;
  std::map<std::string, std::set<std::string>> excluded_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::set<std::string>> var_origins_;
  const std::string* origin_ = nullptr;
  bool infeasible_ = false;
  std::set<std::string> origins_;
  std::set<std::string> violations_;
};

std::vector<std::string> sorted_unique(std::set<std::string> s) {
  s.erase("blocked assignment");
  s.erase("constant");
  s.erase("pinned");
  return {s.begin(), s.end()};
}

}  // namespace

std::vector<std::string> verify(const ConstraintSet& cs, const Solution& s) {
  for (const auto& var : cs.term_vars)
    if (!s.terms.count(var))
      throw MdlError("solution does not cover term variable $" + var);
  for (const auto& var : cs.bool_vars)
    if (!s.booleans.count(var))
      throw MdlError("solution does not cover Boolean variable " + var);

  Substitution sub{s.booleans, s.terms};
  std::vector<std::string> failures;
  for (const auto& c : cs.constraints) {
    try {
      if (!leq(ground(c.junior, sub), ground(c.senior, sub)))
        failures.push_back(c.origin);
    } catch (const MdlError&) {
      failures.push_back(c.origin);  // ill-formed grounding is a failure
    }
  }
  return failures;
}

Verdict solve(const ConstraintSet& cs, const SolverConfig& cfg) {
  Verdict verdict;

  std::map<std::string, Term::Kind> tail_kinds;
  std::set<std::string> kind_conflicts;
  for (const auto& c : cs.constraints) {
    scan_tail_kinds(c.junior, tail_kinds, kind_conflicts);
    scan_tail_kinds(c.senior, tail_kinds, kind_conflicts);
  }
  if (!kind_conflicts.empty()) {
    std::set<std::string> origins;
    for (const auto& c : cs.constraints) {
      FreeVars fv = free_vars(c.junior);
      FreeVars fv2 = free_vars(c.senior);
      fv.term_vars.insert(fv2.term_vars.begin(), fv2.term_vars.end());
      for (const auto& v : kind_conflicts)
        if (fv.term_vars.count(v)) origins.insert(c.origin);
    }
    verdict.kind = Verdict::Kind::Unsat;
    verdict.failures = sorted_unique(origins);
    return verdict;
  }

  SatSolver sat;
  for (const auto& v : cs.bool_vars) sat.register_var(v);
  for (const auto& c : cs.constraints)
    abstract_constraint(c.junior, c.senior, BoolExpr::constant(true), c.origin, sat);
  for (const auto& [var, value] : cfg.pinned)
    sat.add_formula(value ? BoolExpr::variable(var)
                          : BoolExpr::negation(BoolExpr::variable(var)),
                    "pinned");

  std::set<std::string> failure_origins;
  int diverged_betas = 0;
  const size_t bool_count = cs.bool_vars.size();
  const long max_iterations =
      (bool_count >= 20 ? (1L << 20) : (1L << bool_count)) + 4;

  for (long iteration = 0; iteration < max_iterations; ++iteration) {
    // Boolean stage.
    std::optional<std::map<std::string, bool>> model;
    if (cfg.prefer_true) {
      std::vector<std::pair<std::string, bool>> committed;
      for (const auto& v : cs.bool_vars) {
        committed.emplace_back(v, true);
        if (!sat.solve(committed)) committed.back().second = false;
      }
      model = sat.solve(committed);
    } else {
      model = sat.solve({}, false);
    }
    if (!model) {
      if (diverged_betas > 0) {
        // Some assignments never stabilized, so unsatisfiability is unproven.
        verdict.kind = Verdict::Kind::Diverged;
        return verdict;
      }
      failure_origins.insert(sat.conflict_origins().begin(),
                             sat.conflict_origins().end());
      verdict.kind = Verdict::Kind::Unsat;
      verdict.failures = sorted_unique(failure_origins);
      return verdict;
    }
    std::map<std::string, bool> beta;
    for (const auto& v : cs.bool_vars) beta[v] = model->at(v);

    // Term stage: a straight pass first, then a weakened retry that prefers
    // nil for record variables the first pass could not place.
    bool diverged = false;
    bool solved = false;
    for (int attempt = 0; attempt < 2 && !solved; ++attempt) {
      TermSolver terms(cs, beta, tail_kinds, cfg.max_rounds, attempt == 1);
      TermStage stage = terms.run();
      if (attempt == 0) verdict.rounds = stage.rounds;
      if (stage.status == TermStage::Status::Diverged) {
        if (attempt == 0) diverged = true;
        continue;
      }
      if (stage.status == TermStage::Status::Infeasible) {
        if (!diverged)
          failure_origins.insert(stage.origins.begin(), stage.origins.end());
        continue;
      }
      Solution candidate{beta, stage.assignment};
      auto failures = verify(cs, candidate);
      if (failures.empty()) {
        verdict.kind = Verdict::Kind::Sat;
        verdict.solution = std::move(candidate);
        solved = true;
      } else if (!diverged) {
        failure_origins.insert(failures.begin(), failures.end());
      }
    }
    if (solved) return verdict;
    if (diverged) {
      // The term stage may stabilize under another Boolean assignment; only
      // report divergence when no alternative remains.
      ++diverged_betas;
      if (beta.empty()) {
        verdict.kind = Verdict::Kind::Diverged;
        return verdict;
      }
      sat.block_assignment(beta);
      continue;
    }
    if (beta.empty()) {
      // No Boolean choice to revise.
      verdict.kind = Verdict::Kind::Unsat;
      verdict.failures = sorted_unique(failure_origins);
      return verdict;
    }
    sat.block_assignment(beta);
  }

  verdict.kind = Verdict::Kind::Diverged;
  return verdict;
}

std::vector<Term> enumerate_ground_terms(const BruteUniverse& u) {
  std::vector<Term> previous;  // depth < d
  std::vector<Term> all;
  for (const auto& s : u.symbols) {
    all.push_back(Term::symbol(s));
  }
  // nil is an atom: meets and joins bottom out in it (e.g. the join of two
  // mismatched symbols), so it must be available as a payload at every depth.
  all.push_back(Term::nil());
  for (int depth = 1; depth <= u.max_depth; ++depth) {
    previous.clear();
    previous.insert(previous.end(), all.begin(), all.end());
    std::vector<Term> fresh;
    const size_t n_labels = u.labels.size();
    // Every subset of labels, every payload combination, both kinds.
    for (size_t mask = 0; mask < (size_t{1} << n_labels); ++mask) {
      std::vector<std::string> chosen;
      for (size_t i = 0; i < n_labels; ++i)
        if (mask & (size_t{1} << i)) chosen.push_back(u.labels[i]);
      std::vector<size_t> idx(chosen.size(), 0);
      while (true) {
        for (Term::Kind kind : {Term::Kind::Record, Term::Kind::Choice}) {
          Term t;
          t.kind = kind;
          for (size_t i = 0; i < chosen.size(); ++i)
            t.elements.push_back(
                {chosen[i], BoolExpr::constant(true), previous[idx[i]]});
          // Terms whose payloads all have smaller depth (and the empty
          // record, which is the seeded nil) were emitted already.
          bool duplicate =
              std::find(previous.begin(), previous.end(), t) != previous.end();
          if (!duplicate) fresh.push_back(std::move(t));
          if (all.size() + fresh.size() > u.max_terms)
            throw MdlError("brute-force universe exceeds " +
                           std::to_string(u.max_terms) + " terms");
        }
        if (chosen.empty()) break;
        size_t pos = 0;
        while (pos < idx.size()) {
          if (++idx[pos] < previous.size()) break;
          idx[pos] = 0;
          ++pos;
        }
        if (pos == idx.size()) break;
      }
    }
    all.insert(all.end(), fresh.begin(), fresh.end());
  }
  return all;
}

Verdict brute_solve(const ConstraintSet& cs, const BruteUniverse& u) {
  if (cs.bool_vars.size() > 10)
    throw MdlError("brute_solve supports at most 10 Boolean variables");

  std::map<std::string, Term::Kind> tail_kinds;
  std::set<std::string> kind_conflicts;
  for (const auto& c : cs.constraints) {
    scan_tail_kinds(c.junior, tail_kinds, kind_conflicts);
    scan_tail_kinds(c.senior, tail_kinds, kind_conflicts);
  }

  std::vector<Term> universe = enumerate_ground_terms(u);
  std::vector<std::string> bools(cs.bool_vars.begin(), cs.bool_vars.end());
  std::vector<std::string> tvars(cs.term_vars.begin(), cs.term_vars.end());

  // Candidate terms per variable, restricted by tail-position kind.
  std::vector<std::vector<const Term*>> candidates(tvars.size());
  for (size_t i = 0; i < tvars.size(); ++i) {
    auto kind = tail_kinds.find(tvars[i]);
    for (const auto& t : universe) {
      if (kind != tail_kinds.end() && t.kind != kind->second) continue;
      candidates[i].push_back(&t);
    }
    if (candidates[i].empty()) candidates[i].push_back(&universe.front());
  }

  Verdict verdict;
  std::set<std::string> always_failing;
  bool first_attempt = true;

  const size_t n_assignments = size_t{1} << bools.size();
  for (size_t mask = 0; mask < n_assignments; ++mask) {
    Solution s;
    for (size_t i = 0; i < bools.size(); ++i)
      s.booleans[bools[i]] = (mask & (size_t{1} << i)) != 0;

    std::vector<size_t> idx(tvars.size(), 0);
    while (true) {
      for (size_t i = 0; i < tvars.size(); ++i) s.terms[tvars[i]] = *candidates[i][idx[i]];
      auto failures = verify(cs, s);
      if (failures.empty()) {
        verdict.kind = Verdict::Kind::Sat;
        verdict.solution = s;
        return verdict;
      }
      std::set<std::string> failed(failures.begin(), failures.end());
      if (first_attempt) {
        always_failing = failed;
        first_attempt = false;
      } else {
        std::set<std::string> inter;
        std::set_intersection(always_failing.begin(), always_failing.end(),
                              failed.begin(), failed.end(),
                              std::inserter(inter, inter.begin()));
        always_failing = std::move(inter);
      }
      if (tvars.empty()) break;
      size_t pos = 0;
      while (pos < idx.size()) {
        if (++idx[pos] < candidates[pos].size()) break;
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
  }
  verdict.kind = Verdict::Kind::Unsat;
  verdict.failures = {always_failing.begin(), always_failing.end()};
  return verdict;
}

std::string render_solution(const Solution& s) {
  std::ostringstream os;
  for (const auto& [name, value] : s.booleans)
    os << "bool " << name << " = " << (value ? "true" : "false") << "\n";
  for (const auto& [name, term] : s.terms)
    os << "term " << name << " = " << render_term(term) << "\n";
  return os.str();
}

Solution parse_solution(const std::string& text) {
  Solution s;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    auto b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    auto e = line.find_last_not_of(" \t\r\n");
    line = line.substr(b, e - b + 1);

    std::istringstream ls(line);
    std::string kw, name, eq;
    ls >> kw >> name >> eq;
    if (eq != "=" || name.empty())
      throw MdlError("line " + std::to_string(no) + ": expected '<kind> <name> = ...'");
    std::string rest;
    std::getline(ls, rest);
    if (kw == "bool") {
      auto rb = rest.find_first_not_of(" \t");
      rest = rb == std::string::npos ? "" : rest.substr(rb);
      if (rest == "true")
        s.booleans[name] = true;
      else if (rest == "false")
        s.booleans[name] = false;
      else
        throw MdlError("line " + std::to_string(no) + ": expected true or false");
    } else if (kw == "term") {
      s.terms[name] = parse_term(rest);
    } else {
      throw MdlError("line " + std::to_string(no) + ": unknown entry '" + kw + "'");
    }
  }
  return s;
}

}  // namespace mdlcfg
