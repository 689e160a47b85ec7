#pragma once

#include <string>

#include "mdlcfg/term.hpp"

namespace mdlcfg {

/// Syntax error with 1-based source position.
struct ParseError : MdlError {
  ParseError(const std::string& msg, int line, int col)
      : MdlError(msg + " at line " + std::to_string(line) + ", column " +
                 std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Parses a term from its concrete syntax:
///
///   records  {a: int, b: {c: string} | $t}
///   choices  (: request: {title: string}, error(x || y): {msg: string} :)
///   guards   label(expr): term     with !, &&, ||, true, false
///   vars     $name                 (also in tail position after '|')
///
/// '#' starts a comment running to end of line. Duplicate labels within one
/// collection are rejected.
Term parse_term(const std::string& text);

/// Canonical text form: elements sorted by label, true guards elided.
/// parse_term(render_term(t)) == t for every term.
std::string render_term(const Term& t);

std::string render_bool_expr(const BoolExpr& e);
BoolExpr parse_bool_expr(const std::string& text);

}  // namespace mdlcfg
