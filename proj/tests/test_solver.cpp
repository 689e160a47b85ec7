#include <doctest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "mdlcfg/constraints.hpp"
#include "mdlcfg/parser.hpp"
#include "mdlcfg/solver.hpp"

using namespace mdlcfg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ConstraintSet fixture_problem(const std::string& name) {
  std::string dir = std::string(FIXTURE_DIR) + "/" + name + "/";
  Topology top = load_topology(slurp(dir + "app.topo"));
  std::map<std::string, DerivedService> services;
  for (const auto& entry : {std::string("alice.ifc"), std::string("seller.ifc"),
                            std::string("bob.ifc"), std::string("carol.ifc"),
                            std::string("producer.ifc"), std::string("mid.ifc"),
                            std::string("consumer.ifc")}) {
    std::ifstream probe(dir + entry);
    if (!probe.good()) continue;
    std::ostringstream os;
    os << probe.rdbuf();
    DerivedService svc = parse_bundle(os.str());
    services.emplace(svc.name, std::move(svc));
  }
  return generate(top, services);
}

ConstraintSet single(const std::string& junior, const std::string& senior) {
  ConstraintSet cs;
  Constraint c{parse_term(junior), parse_term(senior), "ch"};
  cs.constraints.push_back(c);
  for (const auto* t : {&c.junior, &c.senior}) {
    FreeVars fv = free_vars(*t);
    cs.bool_vars.insert(fv.bool_vars.begin(), fv.bool_vars.end());
    cs.term_vars.insert(fv.term_vars.begin(), fv.term_vars.end());
  }
  return cs;
}

}  // namespace

TEST_CASE("identical ground interfaces are trivially satisfiable") {
  ConstraintSet cs = single("(: f: {a: int} :)", "(: f: {a: int} :)");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  CHECK(v.solution.booleans.empty());
  CHECK(v.solution.terms.empty());
  CHECK(verify(cs, v.solution).empty());
}

TEST_CASE("unguarded label mismatch is unsatisfiable and names the channel") {
  ConstraintSet cs = single("(: f: {a: int} :)", "(: g: {a: int} :)");
  Verdict v = solve(cs);
  REQUIRE(v.kind == Verdict::Kind::Unsat);
  REQUIRE(v.failures.size() == 1);
  CHECK(v.failures[0] == "ch");
  // the brute-force oracle agrees
  CHECK(brute_solve(cs, {}).kind == Verdict::Kind::Unsat);
}

TEST_CASE("guarded mismatching element is switched off") {
  ConstraintSet cs = single("(: f(p): {a: int} :)", "(: g: {a: int} :)");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  CHECK(v.solution.booleans.at("p") == false);
}

TEST_CASE("three-buyer fixture reproduces the published outcome") {
  ConstraintSet cs = fixture_problem("three_buyer");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  CHECK(v.solution.booleans.at("x") == true);
  CHECK(v.solution.booleans.at("y") == false);
  CHECK(v.solution.booleans.at("z") == true);
  CHECK(v.solution.terms.at("a") == Term::symbol("string"));
  const Term& b = v.solution.terms.at("b");
  REQUIRE(b.kind == Term::Kind::Choice);
  const Element* share = b.find("share");
  REQUIRE(share != nullptr);
  CHECK(share->term == parse_term("{money: int, title: string}"));
  CHECK(verify(cs, v.solution).empty());
}

TEST_CASE("verify flags a mutated three-buyer solution") {
  ConstraintSet cs = fixture_problem("three_buyer");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  Solution mutated = v.solution;
  mutated.booleans["y"] = true;  // re-enables `suggest`, which Seller cannot take
  auto failures = verify(cs, mutated);
  CHECK_FALSE(failures.empty());
}

TEST_CASE("verify rejects an uncovered solution") {
  ConstraintSet cs = single("$v", "{a: int}");
  CHECK_THROWS_AS(verify(cs, Solution{}), MdlError);
}

TEST_CASE("flow-inheritance fixture binds both record tails") {
  ConstraintSet cs = fixture_problem("flow");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  CHECK(v.solution.terms.at("a") == parse_term("{author: string}"));
  CHECK(v.solution.terms.at("d") == parse_term("{author: string}"));
  CHECK(v.solution.booleans.at("x") == true);
}

TEST_CASE("conflicting tail kinds are unsatisfiable") {
  ConstraintSet cs = single("{a: int | $t}", "(: | $t :)");
  CHECK(solve(cs).kind == Verdict::Kind::Unsat);
}

TEST_CASE("prefer_true maximality on the three-buyer fixture") {
  ConstraintSet cs = fixture_problem("three_buyer");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  // Each false variable stays necessary: pinning it true (with earlier
  // lexicographic commitments) must make the instance unsatisfiable.
  std::vector<std::string> order(cs.bool_vars.begin(), cs.bool_vars.end());
  for (size_t i = 0; i < order.size(); ++i) {
    if (v.solution.booleans.at(order[i])) continue;
    SolverConfig cfg;
    for (size_t k = 0; k < i; ++k)
      cfg.pinned[order[k]] = v.solution.booleans.at(order[k]);
    cfg.pinned[order[i]] = true;
    CHECK(solve(cs, cfg).kind == Verdict::Kind::Unsat);
  }
}

TEST_CASE("determinism of solve") {
  ConstraintSet cs = fixture_problem("three_buyer");
  Verdict a = solve(cs);
  Verdict b = solve(cs);
  REQUIRE(a.sat());
  REQUIRE(b.sat());
  CHECK(render_solution(a.solution) == render_solution(b.solution));
}

TEST_CASE("solution file round-trip") {
  ConstraintSet cs = fixture_problem("three_buyer");
  Verdict v = solve(cs);
  REQUIRE(v.sat());
  Solution round = parse_solution(render_solution(v.solution));
  CHECK(render_solution(round) == render_solution(v.solution));
  CHECK_THROWS_AS(parse_solution("bool x maybe\n"), MdlError);
  CHECK_THROWS_AS(parse_solution("frob x = 1\n"), MdlError);
}

TEST_CASE("enumerate_ground_terms sizes") {
  BruteUniverse u1;
  u1.max_depth = 1;
  // Atoms: 2 symbols + nil. Collections over the three atoms, per subset of
  // {a, b} and both kinds: (1 + 3 + 3 + 9) * 2 = 32, minus {} (== nil).
  CHECK(enumerate_ground_terms(u1).size() == 34);
  BruteUniverse tiny;
  tiny.max_depth = 2;
  tiny.max_terms = 50;
  CHECK_THROWS_AS(enumerate_ground_terms(tiny), MdlError);
}

TEST_CASE("oracle equivalence on random instances, depth-1 universe") {
  testing::Rng rng(808017424);
  testing::InstanceOptions opt;
  opt.max_depth = 1;  // witnesses then fit in the depth-1 universe
  BruteUniverse u;
  u.max_depth = 1;
  int sat_seen = 0, unsat_seen = 0;
  for (int i = 0; i < 300; ++i) {
    ConstraintSet cs = testing::random_instance(rng, opt);
    Verdict fast = solve(cs);
    Verdict brute = brute_solve(cs, u);
    INFO("instance ", i, ":\n", render_constraints(cs));
    REQUIRE(fast.kind != Verdict::Kind::Diverged);
    CHECK(fast.sat() == brute.sat());
    if (fast.sat()) {
      ++sat_seen;
      CHECK(verify(cs, fast.solution).empty());
    } else {
      ++unsat_seen;
    }
  }
  // The corpus must exercise both verdicts to mean anything.
  CHECK(sat_seen > 20);
  CHECK(unsat_seen > 20);
}

TEST_CASE("oracle equivalence on random instances, depth-2 universe") {
  testing::Rng rng(271828182);
  testing::InstanceOptions opt;
  opt.max_depth = 2;
  opt.term_pool = {"V0"};  // one term variable keeps the brute search tractable
  opt.bool_pool = {"p", "q", "r", "s"};
  BruteUniverse u;
  u.max_depth = 2;
  for (int i = 0; i < 200; ++i) {
    ConstraintSet cs = testing::random_instance(rng, opt);
    Verdict fast = solve(cs);
    Verdict brute = brute_solve(cs, u);
    INFO("instance ", i, ":\n", render_constraints(cs));
    REQUIRE(fast.kind != Verdict::Kind::Diverged);
    CHECK(fast.sat() == brute.sat());
    if (fast.sat()) CHECK(verify(cs, fast.solution).empty());
  }
}

TEST_CASE("brute_solve rejects oversized Boolean spaces") {
  ConstraintSet cs;
  for (int i = 0; i < 11; ++i) cs.bool_vars.insert("b" + std::to_string(i));
  CHECK_THROWS_AS(brute_solve(cs, {}), MdlError);
}

TEST_CASE("seniority hole is unsat for both solvers") {
  ConstraintSet cs = single("int", "string");
  CHECK(solve(cs).kind == Verdict::Kind::Unsat);
  CHECK(brute_solve(cs, {}).kind == Verdict::Kind::Unsat);
}
