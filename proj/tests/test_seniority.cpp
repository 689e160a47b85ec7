#include <doctest.h>

#include "generators.hpp"
#include "lattice_oracle.hpp"
#include "mdlcfg/parser.hpp"
#include "mdlcfg/seniority.hpp"
#include "mdlcfg/solver.hpp"

using namespace mdlcfg;

static Term T(const std::string& s) { return parse_term(s); }

TEST_CASE("symbols and records are junior to nil") {
  CHECK(leq(Term::symbol("int"), Term::nil()));
  CHECK(leq(T("{a: int, b: string}"), Term::nil()));
  CHECK_FALSE(leq(T("(: a: int :)"), Term::nil()));
  CHECK_FALSE(leq(T("(: :)"), Term::nil()));
}

TEST_CASE("record width subtyping: the larger record is junior") {
  CHECK(leq(T("{id: int, money: int, title: string}"), T("{money: int, title: string}")));
  CHECK_FALSE(leq(T("{money: int, title: string}"),
                  T("{id: int, money: int, title: string}")));
}

TEST_CASE("choice width subtyping: the smaller choice is junior") {
  Term small = T("(: share: {money: int, title: string} :)");
  Term big = T("(: share: {money: int, title: string}, response: {title: string} :)");
  CHECK(leq(small, big));
  CHECK_FALSE(leq(big, small));
  CHECK(leq(T("(: :)"), small));  // empty choice is bottom among choices
}

TEST_CASE("symbols are atoms") {
  CHECK(leq(Term::symbol("int"), Term::symbol("int")));
  CHECK_FALSE(leq(Term::symbol("int"), Term::symbol("string")));
  CHECK_FALSE(leq(Term::symbol("int"), T("{a: int}")));
}

TEST_CASE("depth direction is covariant in both collections") {
  CHECK(leq(T("{a: {x: int, y: int}}"), T("{a: {x: int}}")));
  CHECK(leq(T("(: a: {x: int, y: int} :)"), T("(: a: {x: int} :)")));
  CHECK_FALSE(leq(T("{a: {x: int}}"), T("{a: {x: int, y: int}}")));
}

TEST_CASE("false-guarded elements are ignored") {
  CHECK(leq(T("{a(false): int}"), Term::nil()));
  CHECK(leq(Term::nil(), T("{a(false): int}")));
}

TEST_CASE("meet/join spot checks") {
  CHECK(meet(T("{a: int}"), T("{b: int}")) == T("{a: int, b: int}"));
  CHECK(meet(T("{a: int}"), Term::nil()) == T("{a: int}"));
  CHECK(meet(Term::symbol("int"), Term::nil()) == Term::symbol("int"));
  CHECK_FALSE(meet(Term::symbol("int"), Term::symbol("string")).has_value());

  CHECK(join(T("{a: int, b: int}"), T("{a: int, c: int}")) == T("{a: int}"));
  CHECK(join(T("(: p: {a: int} :)"), T("(: q: {b: int} :)")) ==
        T("(: p: {a: int}, q: {b: int} :)"));
  CHECK(join(T("{a: int}"), T("{a: int}")) == T("{a: int}"));
  CHECK(join(Term::symbol("int"), Term::symbol("string")) == Term::nil());
}

TEST_CASE("reflexivity and nil-top on random ground terms") {
  testing::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    Term t = testing::random_ground_term(rng, 2, {"a", "b", "c"}, {"int", "string"});
    CHECK(leq(t, t));
    if (t.kind != Term::Kind::Choice) CHECK(leq(t, Term::nil()));
  }
}

namespace {

// Builds a term senior to t by deleting record elements / keeping choice
// subsets, recursing into payloads.
Term seniorize(testing::Rng& rng, const Term& t) {
  if (t.kind != Term::Kind::Record && t.kind != Term::Kind::Choice) return t;
  Term out;
  out.kind = t.kind;
  for (const auto& e : t.elements) {
    bool keep = t.kind == Term::Kind::Record ? testing::chance(rng, 0.6) : true;
    if (keep) out.elements.push_back({e.label, e.guard, seniorize(rng, e.term)});
  }
  if (t.kind == Term::Kind::Record && testing::chance(rng, 0.2)) return Term::nil();
  return out;
}

}  // namespace

TEST_CASE("transitivity on constructed chains") {
  testing::Rng rng(2718);
  for (int i = 0; i < 1000; ++i) {
    Term a = testing::random_ground_term(rng, 2, {"a", "b", "c"}, {"int", "string"});
    Term b = seniorize(rng, a);
    Term c = seniorize(rng, b);
    REQUIRE(leq(a, b));
    REQUIRE(leq(b, c));
    CHECK(leq(a, c));
  }
}

TEST_CASE("meet and join are bounds whenever defined") {
  testing::Rng rng(5150);
  for (int i = 0; i < 1000; ++i) {
    Term t1 = testing::random_ground_term(rng, 2, {"a", "b"}, {"int", "string"});
    Term t2 = testing::random_ground_term(rng, 2, {"a", "b"}, {"int", "string"});
    if (auto m = meet(t1, t2)) {
      CHECK(leq(*m, t1));
      CHECK(leq(*m, t2));
    }
    if (auto j = join(t1, t2)) {
      CHECK(leq(t1, *j));
      CHECK(leq(t2, *j));
    }
  }
}

TEST_CASE("lattice oracle over the full depth-1 universe") {
  BruteUniverse u;
  u.max_depth = 1;
  u.labels = {"a", "b", "c"};
  auto universe = enumerate_ground_terms(u);
  for (const auto& t1 : universe)
    for (const auto& t2 : universe) {
      std::string err = testing::check_lattice_pair(t1, t2, universe);
      if (!err.empty()) FAIL_CHECK(err);
    }
}

TEST_CASE("lattice oracle on sampled depth-2 pairs") {
  BruteUniverse u;
  u.max_depth = 2;
  u.labels = {"a", "b"};
  auto universe = enumerate_ground_terms(u);
  testing::Rng rng(31337);
  for (int i = 0; i < 60; ++i) {
    const Term& t1 = universe[testing::pick(rng, 0, static_cast<int>(universe.size()) - 1)];
    const Term& t2 = universe[testing::pick(rng, 0, static_cast<int>(universe.size()) - 1)];
    std::string err = testing::check_lattice_pair(t1, t2, universe);
    if (!err.empty()) FAIL_CHECK(err);
  }
}
