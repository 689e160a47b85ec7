#include <doctest.h>

#include "mdlcfg/emit.hpp"
#include "mdlcfg/parser.hpp"

using namespace mdlcfg;

namespace {

DerivedService mid_service() {
  DerivedService svc;
  svc.name = "Mid";
  svc.input_ifaces[1] = parse_term("(: request(x): {title: string | $a} :)");
  svc.output_ifaces[1] = parse_term("(: response(x): {money: int, title: string | $d} :)");
  svc.intra_constraints = {{"a", "d"}};
  return svc;
}

}  // namespace

TEST_CASE("record tails expand to decl/use texts") {
  Solution s;
  s.booleans["x"] = true;
  s.terms["a"] = parse_term("{author: string}");
  s.terms["d"] = parse_term("{author: string}");
  ServiceConfig cfg = emit_config(mid_service(), s);
  CHECK(cfg.tail_decl_texts.at("a") == ", string author");
  CHECK(cfg.tail_use_texts.at("a") == ", author");
  CHECK(cfg.tail_decl_texts.at("d") == ", string author");
  CHECK(cfg.tail_use_texts.at("d") == ", author");
  CHECK(cfg.bool_defs.at("x") == true);
}

TEST_CASE("nil tails yield empty strings") {
  Solution s;
  s.booleans["x"] = true;
  s.terms["a"] = Term::nil();
  s.terms["d"] = Term::nil();
  ServiceConfig cfg = emit_config(mid_service(), s);
  CHECK(cfg.tail_decl_texts.at("a").empty());
  CHECK(cfg.tail_use_texts.at("a").empty());
}

TEST_CASE("multi-field tails are label-sorted with equal arity") {
  DerivedService svc;
  svc.name = "S";
  svc.input_ifaces[1] = parse_term("(: f: {p: int | $t} :)");
  Solution s;
  s.terms["t"] = parse_term("{beta: int, alpha: string}");
  ServiceConfig cfg = emit_config(svc, s);
  CHECK(cfg.tail_decl_texts.at("t") == ", string alpha, int beta");
  CHECK(cfg.tail_use_texts.at("t") == ", alpha, beta");
}

TEST_CASE("false switches are still recorded") {
  Solution s;
  s.booleans["x"] = false;
  s.terms["a"] = Term::nil();
  s.terms["d"] = Term::nil();
  ServiceConfig cfg = emit_config(mid_service(), s);
  CHECK(cfg.bool_defs.at("x") == false);
  CHECK(format_config(cfg).find("BV_x = false\n") != std::string::npos);
  // the C header only defines true switches
  CHECK(format_config_cpp(cfg).find("BV_x") == std::string::npos);
}

TEST_CASE("emit errors") {
  Solution s;
  s.booleans["x"] = true;
  SUBCASE("uncovered tail") { CHECK_THROWS_AS(emit_config(mid_service(), s), MdlError); }
  SUBCASE("non-record tail value") {
    s.terms["a"] = Term::choice({});
    s.terms["d"] = Term::nil();
    CHECK_THROWS_WITH_AS(emit_config(mid_service(), s),
                         doctest::Contains("non-record"), MdlError);
  }
}

TEST_CASE("choice tails produce no TV entries") {
  DerivedService svc;
  svc.name = "S";
  svc.input_ifaces[1] = parse_term("(: f: {p: int} | $c :)");
  Solution s;
  s.terms["c"] = Term::choice({});
  ServiceConfig cfg = emit_config(svc, s);
  CHECK(cfg.tail_decl_texts.empty());
}

TEST_CASE("format_config is sorted and quoted; no orphan macros") {
  Solution s;
  s.booleans["x"] = true;
  s.terms["a"] = parse_term("{author: string}");
  s.terms["d"] = Term::nil();
  std::string text = format_config(emit_config(mid_service(), s));
  CHECK(text ==
        "BV_x = true\n"
        "TV_a_decl = \", string author\"\n"
        "TV_a_use = \", author\"\n"
        "TV_d_decl = \"\"\n"
        "TV_d_use = \"\"\n");
}

TEST_CASE("cpp header format") {
  Solution s;
  s.booleans["x"] = true;
  s.terms["a"] = parse_term("{author: string}");
  s.terms["d"] = Term::nil();
  std::string text = format_config_cpp(emit_config(mid_service(), s));
  CHECK(text ==
        "#define BV_x\n"
        "#define TV_a_decl , string author\n"
        "#define TV_a_use , author\n"
        "#define TV_d_decl \n"
        "#define TV_d_use \n");
}
