#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mdlcfg/constraints.hpp"
#include "mdlcfg/derivation.hpp"
#include "mdlcfg/parser.hpp"

using namespace mdlcfg;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSellerStub =
    "service Seller\n"
    "in 1 request(title:string)\n"
    "in 1 payment(title:string, money:int)\n"
    "salvo 1 response(title:string, money:int) from request\n"
    "salvo 1 invoice(id:int) from payment\n"
    "salvo 2 error(msg:string) from request,payment\n";

}  // namespace

TEST_CASE("parse_stub on the Seller service") {
  ServiceStub stub = parse_stub(kSellerStub);
  CHECK(stub.name == "Seller");
  CHECK(stub.inputs.size() == 2);
  CHECK(stub.salvos.size() == 3);
  CHECK(stub.salvos[2].callers == std::set<std::string>{"request", "payment"});
}

TEST_CASE("stub validation errors") {
  CHECK_THROWS_WITH_AS(
      parse_stub("service S\nin 1 f()\nsalvo 1 s() from foo\n"),
      doctest::Contains("unknown caller"), MdlError);
  CHECK_THROWS_WITH_AS(parse_stub("service S\nin 1 f()\nin 1 f()\n"),
                       doctest::Contains("duplicate function"), MdlError);
  CHECK_THROWS_AS(parse_stub("service S\nin 0 f()\n"), MdlError);
  CHECK_THROWS_AS(parse_stub("in 1 f()\n"), MdlError);
}

TEST_CASE("stub with zero salvos derives an empty output") {
  DerivedService svc = derive_interfaces(parse_stub("service S\nin 1 f(p:int)\n"));
  REQUIRE(svc.output_ifaces.count(1));
  const Term& out1 = svc.output_ifaces.at(1);
  CHECK(out1.kind == Term::Kind::Choice);
  CHECK(out1.elements.empty());
  CHECK(out1.tail == "S_inherit");
  CHECK(svc.intra_constraints.empty());
  CHECK(svc.input_ifaces.at(1) ==
        parse_term("(: f(S_b_f): {p: int | $S_t_f} | $S_inherit :)"));
}

TEST_CASE("derive_interfaces reproduces the Seller interfaces") {
  DerivedService svc = derive_interfaces(parse_stub(kSellerStub));
  CHECK(svc.input_ifaces.at(1) ==
        parse_term("(: request(Seller_b_request): {title: string | $Seller_t_request},"
                   "   payment(Seller_b_payment):"
                   "     {money: int, title: string | $Seller_t_payment}"
                   " | $Seller_inherit :)"));
  CHECK(svc.output_ifaces.at(1) ==
        parse_term("(: response(Seller_b_request):"
                   "     {money: int, title: string | $Seller_t_response},"
                   "   invoice(Seller_b_payment): {id: int | $Seller_t_invoice}"
                   " | $Seller_inherit :)"));
  CHECK(svc.output_ifaces.at(2) ==
        parse_term("(: error(Seller_b_payment || Seller_b_request):"
                   "     {msg: string | $Seller_t_error} :)"));
  CHECK(svc.intra_constraints ==
        std::vector<std::pair<std::string, std::string>>{
            {"Seller_t_payment", "Seller_t_error"},
            {"Seller_t_payment", "Seller_t_invoice"},
            {"Seller_t_request", "Seller_t_error"},
            {"Seller_t_request", "Seller_t_response"}});
}

TEST_CASE("derivation is deterministic") {
  DerivedService a = derive_interfaces(parse_stub(kSellerStub));
  DerivedService b = derive_interfaces(parse_stub(kSellerStub));
  CHECK(canonical_signature(a) == canonical_signature(b));
  CHECK(render_bundle(a) == render_bundle(b));
}

TEST_CASE("every derived interface is a choice of records") {
  DerivedService svc = derive_interfaces(parse_stub(kSellerStub));
  for (const auto* ifaces : {&svc.input_ifaces, &svc.output_ifaces})
    for (const auto& [port, term] : *ifaces) {
      CHECK(term.kind == Term::Kind::Choice);
      for (const auto& e : term.elements)
        CHECK(e.term.kind == Term::Kind::Record);
    }
}

TEST_CASE("canonical_signature matches the published Seller interfaces") {
  DerivedService derived = derive_interfaces(parse_stub(kSellerStub));
  DerivedService expected =
      parse_bundle(slurp(std::string(FIXTURE_DIR) + "/seller/seller_expected.ifc"));
  CHECK(canonical_signature(derived) == canonical_signature(expected));
}

TEST_CASE("two callers of one salvo share a disjunction guard") {
  DerivedService svc = derive_interfaces(parse_stub(
      "service S\nin 1 f()\nin 1 g()\nsalvo 1 s(v:int) from f,g\n"));
  const Element* e = svc.output_ifaces.at(1).find("s");
  REQUIRE(e != nullptr);
  CHECK(e->guard == parse_bool_expr("S_b_f || S_b_g"));
  CHECK(svc.intra_constraints ==
        std::vector<std::pair<std::string, std::string>>{{"S_t_f", "S_t_s"},
                                                         {"S_t_g", "S_t_s"}});
}

TEST_CASE("apply_shell renames routed outputs and merges inputs") {
  DerivedService core;
  core.name = "calc";
  core.input_ifaces[1] = parse_term("(: compute(x): {a: int, b: int} :)");
  core.output_ifaces[1] = parse_term("(: result(x): {c: int} :)");

  ShellSpec shell = parse_shell(
      "shell calc\n"
      "merge 1,2 -> in 1\n"
      "route out 1 -> 1 rename result=factorial\n"
      "route out 1 -> 2 rename result=square\n");
  DerivedService out = apply_shell(core, shell);
  CHECK(out.input_ifaces.at(1) == core.input_ifaces.at(1));
  CHECK(out.input_ifaces.at(2) == core.input_ifaces.at(1));
  CHECK(out.output_ifaces.at(1) == parse_term("(: factorial(x): {c: int} :)"));
  CHECK(out.output_ifaces.at(2) == parse_term("(: square(x): {c: int} :)"));
}

TEST_CASE("empty shell is the identity") {
  DerivedService core = derive_interfaces(parse_stub(kSellerStub));
  DerivedService out = apply_shell(core, parse_shell("shell Seller\n"));
  CHECK(render_bundle(out) == render_bundle(core));
}

TEST_CASE("shell validation errors") {
  DerivedService core;
  core.name = "S";
  core.output_ifaces[1] = parse_term("(: r: {c: int} :)");
  CHECK_THROWS_WITH_AS(
      apply_shell(core, parse_shell("shell S\nroute out 1 -> 1 rename gone=x\n")),
      doctest::Contains("absent"), MdlError);
  CHECK_THROWS_WITH_AS(
      apply_shell(core, parse_shell("shell S\nroute out 1 -> 1\nroute out 1 -> 1\n")),
      doctest::Contains("assign"), MdlError);
  CHECK_THROWS_AS(apply_shell(core, parse_shell("shell S\nroute out 9 -> 1\n")),
                  MdlError);
  CHECK_THROWS_AS(parse_shell("shell S\nroute out 1 -> 1 rename a=c,b=c\n"),
                  MdlError);
}
