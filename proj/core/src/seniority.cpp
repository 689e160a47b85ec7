#include "mdlcfg/seniority.hpp"

#include <algorithm>

namespace mdlcfg {

namespace {

// Elements that survive guard evaluation, label-sorted. Ground terms carry
// constant guards only.
std::vector<const Element*> live_elements(const Term& t) {
  std::vector<const Element*> es;
  for (const auto& e : t.elements)
    if (!e.guard.is_const(false)) es.push_back(&e);
  std::sort(es.begin(), es.end(),
            [](const Element* a, const Element* b) { return a->label < b->label; });
  return es;
}

bool is_nil_like(const Term& t) {
  return t.kind == Term::Kind::Record && !t.tail && live_elements(t).empty();
}

const Element* find_live(const std::vector<const Element*>& es,
                         const std::string& label) {
  for (const auto* e : es)
    if (e->label == label) return e;
  return nullptr;
}

Term make_collection(Term::Kind kind, std::vector<Element> es) {
  std::sort(es.begin(), es.end(),
            [](const Element& a, const Element& b) { return a.label < b.label; });
  Term t;
  t.kind = kind;
  t.elements = std::move(es);
  return t;
}

}  // namespace

bool leq(const Term& junior, const Term& senior) {
  if (is_nil_like(senior))
    return junior.kind == Term::Kind::Symbol || junior.kind == Term::Kind::Record;
  if (junior.kind != senior.kind) return false;
  switch (junior.kind) {
    case Term::Kind::Symbol:
      return junior.name == senior.name;
    case Term::Kind::Record: {
      auto js = live_elements(junior);
      for (const auto* se : live_elements(senior)) {
        const Element* je = find_live(js, se->label);
        if (!je || !leq(je->term, se->term)) return false;
      }
      return true;
    }
    case Term::Kind::Choice: {
      auto ss = live_elements(senior);
      for (const auto* je : live_elements(junior)) {
        const Element* se = find_live(ss, je->label);
        if (!se || !leq(je->term, se->term)) return false;
      }
      return true;
    }
    case Term::Kind::Var:
      return false;  // non-ground input
  }
  return false;
}

std::optional<Term> meet(const Term& t1, const Term& t2) {
  if (t1.kind == Term::Kind::Symbol && t2.kind == Term::Kind::Symbol)
    return t1.name == t2.name ? std::optional<Term>(t1) : std::nullopt;

  // nil is the top of symbols and records: meet with nil is the other side.
  if (is_nil_like(t1) && t2.kind != Term::Kind::Choice) return t2;
  if (is_nil_like(t2) && t1.kind != Term::Kind::Choice) return t1;

  if (t1.kind == Term::Kind::Record && t2.kind == Term::Kind::Record) {
    auto e1 = live_elements(t1);
    auto e2 = live_elements(t2);
    std::vector<Element> out;
    for (const auto* e : e1) {
      const Element* other = find_live(e2, e->label);
      if (!other) {
        out.push_back({e->label, BoolExpr::constant(true), e->term});
        continue;
      }
      auto m = meet(e->term, other->term);
      if (!m) return std::nullopt;  // label demanded with irreconcilable fields
      out.push_back({e->label, BoolExpr::constant(true), *m});
    }
    for (const auto* e : e2)
      if (!find_live(e1, e->label))
        out.push_back({e->label, BoolExpr::constant(true), e->term});
    return make_collection(Term::Kind::Record, std::move(out));
  }

  if (t1.kind == Term::Kind::Choice && t2.kind == Term::Kind::Choice) {
    auto e2 = live_elements(t2);
    std::vector<Element> out;
    for (const auto* e : live_elements(t1)) {
      const Element* other = find_live(e2, e->label);
      if (!other) continue;
      auto m = meet(e->term, other->term);
      if (m) out.push_back({e->label, BoolExpr::constant(true), *m});
    }
    return make_collection(Term::Kind::Choice, std::move(out));
  }

  return std::nullopt;
}

std::optional<Term> join(const Term& t1, const Term& t2) {
  if (t1.kind == Term::Kind::Choice || t2.kind == Term::Kind::Choice) {
    if (t1.kind != t2.kind) return std::nullopt;  // choices only relate to choices
    auto e1 = live_elements(t1);
    auto e2 = live_elements(t2);
    std::vector<Element> out;
    for (const auto* e : e1) {
      const Element* other = find_live(e2, e->label);
      if (!other) {
        out.push_back({e->label, BoolExpr::constant(true), e->term});
        continue;
      }
      auto j = join(e->term, other->term);
      if (!j) return std::nullopt;  // both sides demand the label, no common senior
      out.push_back({e->label, BoolExpr::constant(true), *j});
    }
    for (const auto* e : e2)
      if (!find_live(e1, e->label))
        out.push_back({e->label, BoolExpr::constant(true), e->term});
    return make_collection(Term::Kind::Choice, std::move(out));
  }

  if (t1.kind == Term::Kind::Symbol && t2.kind == Term::Kind::Symbol)
    return t1.name == t2.name ? std::optional<Term>(t1) : std::optional<Term>(Term::nil());

  if (t1.kind == Term::Kind::Record && t2.kind == Term::Kind::Record) {
    auto e2 = live_elements(t2);
    std::vector<Element> out;
    for (const auto* e : live_elements(t1)) {
      const Element* other = find_live(e2, e->label);
      if (!other) continue;
      auto j = join(e->term, other->term);
      if (j) out.push_back({e->label, BoolExpr::constant(true), *j});
    }
    return make_collection(Term::Kind::Record, std::move(out));
  }

  // symbol vs record: nil is the only common senior.
  return Term::nil();
}

}  // namespace mdlcfg
