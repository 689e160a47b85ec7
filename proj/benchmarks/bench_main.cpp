#include <benchmark/benchmark.h>

#include "mdlcfg/constraints.hpp"
#include "mdlcfg/parser.hpp"
#include "mdlcfg/seniority.hpp"
#include "mdlcfg/solver.hpp"

using namespace mdlcfg;

namespace {

const char* kAliceOut =
    "(: request: {title: $a}, payment: {id: int, money: int, title: $a},"
    " share(x): {money: int, title: $a}, suggest(y): {title: $a} :)";

ConstraintSet three_buyer() {
  auto svc = [](const std::string& text) { return parse_bundle(text); };
  std::map<std::string, DerivedService> services;
  DerivedService alice = svc(std::string("service Alice\nin1 = (: :)\nout1 = ") +
                             kAliceOut + "\n");
  DerivedService seller = svc(
      "service Seller\n"
      "in1 = (: request: {title: string}, payment: {money: int, title: string} | $b :)\n"
      "in2 = (: :)\n"
      "out1 = (: response: {money: int, title: string} | $b :)\n"
      "out2 = (: :)\n");
  DerivedService bob = svc(
      "service Bob\n"
      "in1 = (: share(z): {money: int, title: string},"
      " response: {money: int, title: string} | $c :)\n"
      "in2 = (: :)\n"
      "out1 = (: share(z): {money: int, title: string} | $c :)\n"
      "out2 = (: :)\n");
  DerivedService carol = svc(
      "service Carol\nin1 = (: share: {money: int, title: string} :)\nout1 = (: :)\n");
  for (auto* s : {&alice, &seller, &bob, &carol}) services.emplace(s->name, *s);
  Topology top = load_topology(
      "channel Alice.out1 -> Seller.in1\n"
      "channel Seller.out1 -> Bob.in1\n"
      "channel Bob.out1 -> Carol.in1\n"
      "channel Carol.out1 -> Bob.in2\n"
      "channel Bob.out2 -> Seller.in2\n"
      "channel Seller.out2 -> Alice.in1\n");
  return generate(top, services);
}

void BM_ParseRender(benchmark::State& state) {
  for (auto _ : state) {
    Term t = parse_term(kAliceOut);
    benchmark::DoNotOptimize(render_term(t));
  }
}
BENCHMARK(BM_ParseRender);

void BM_Leq(benchmark::State& state) {
  Term junior = parse_term("{id: int, money: int, title: string, extra: {a: int}}");
  Term senior = parse_term("{money: int, title: string}");
  for (auto _ : state) benchmark::DoNotOptimize(leq(junior, senior));
}
BENCHMARK(BM_Leq);

void BM_MeetJoin(benchmark::State& state) {
  Term t1 = parse_term("{a: int, b: {x: int, y: string}}");
  Term t2 = parse_term("{b: {x: int}, c: string}");
  for (auto _ : state) {
    benchmark::DoNotOptimize(meet(t1, t2));
    benchmark::DoNotOptimize(join(t1, t2));
  }
}
BENCHMARK(BM_MeetJoin);

void BM_SolveThreeBuyer(benchmark::State& state) {
  ConstraintSet cs = three_buyer();
  for (auto _ : state) {
    Verdict v = solve(cs);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_SolveThreeBuyer);

}  // namespace

BENCHMARK_MAIN();
