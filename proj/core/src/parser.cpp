#include "mdlcfg/parser.hpp"

#include <cctype>
#include <sstream>

namespace mdlcfg {

namespace {

struct Lexer {
  explicit Lexer(const std::string& text) : src(text) {}

  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= src.size();
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  bool try_consume(const std::string& tok) {
    skip_ws();
    if (src.compare(pos, tok.size(), tok) == 0) {
      for (size_t i = 0; i < tok.size(); ++i) advance();
      return true;
    }
    return false;
  }

  void expect(const std::string& tok) {
    if (!try_consume(tok)) fail("expected '" + tok + "'");
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string identifier() {
    skip_ws();
    if (pos >= src.size() || !ident_start(src[pos])) fail("expected identifier");
    std::string id;
    while (pos < src.size() && ident_char(src[pos])) {
      id += src[pos];
      advance();
    }
    return id;
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& text) : lex(text) {}

  BoolExpr bool_atom() {
    if (lex.try_consume("(")) {
      BoolExpr e = bool_or();
      lex.expect(")");
      return e;
    }
    if (lex.try_consume("!")) return BoolExpr::negation(bool_atom());
    std::string id = lex.identifier();
    if (id == "true") return BoolExpr::constant(true);
    if (id == "false") return BoolExpr::constant(false);
    return BoolExpr::variable(id);
  }

  BoolExpr bool_and() {
    BoolExpr e = bool_atom();
    while (lex.try_consume("&&")) e = BoolExpr::conjunction(std::move(e), bool_atom());
    return e;
  }

  BoolExpr bool_or() {
    BoolExpr e = bool_and();
    while (lex.try_consume("||")) e = BoolExpr::disjunction(std::move(e), bool_and());
    return e;
  }

  std::string tail_var() {
    lex.expect("$");
    return lex.identifier();
  }

  // Shared body of records and choices up to (but not including) the closer.
  void collection_body(Term& out, const std::string& closer) {
    if (lex.try_consume("|")) {
      out.tail = tail_var();
      return;
    }
    char c = lex.peek();
    if (Lexer::ident_start(c)) {
      while (true) {
        std::string label = lex.identifier();
        if (out.find(label))
          lex.fail("duplicate label '" + label + "'");
        BoolExpr guard = BoolExpr::constant(true);
        if (lex.try_consume("(")) {
          guard = bool_or();
          lex.expect(")");
        }
        lex.expect(":");
        // A lone ':' would also start the choice closer ':)'; the element
        // separator disambiguates.
        Term payload = term();
        out.elements.push_back({label, std::move(guard), std::move(payload)});
        if (lex.try_consume(",")) continue;
        if (lex.try_consume("|")) out.tail = tail_var();
        break;
      }
    }
    (void)closer;
  }

  Term term() {
    char c = lex.peek();
    if (c == '{') {
      lex.expect("{");
      Term out;
      out.kind = Term::Kind::Record;
      collection_body(out, "}");
      lex.expect("}");
      return out;
    }
    if (c == '(') {
      lex.expect("(:");
      Term out;
      out.kind = Term::Kind::Choice;
      collection_body(out, ":)");
      lex.expect(":)");
      return out;
    }
    if (c == '$') return Term::var(tail_var());
    if (Lexer::ident_start(c)) return Term::symbol(lex.identifier());
    lex.fail("expected a term");
  }
};

int precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::Or:
      return 1;
    case BoolExpr::Kind::And:
      return 2;
    case BoolExpr::Kind::Not:
      return 3;
    default:
      return 4;
  }
}

void render_bool(const BoolExpr& e, int parent_prec, std::ostream& os) {
  int prec = precedence(e.kind);
  bool parens = prec < parent_prec;
  if (parens) os << '(';
  switch (e.kind) {
    case BoolExpr::Kind::True:
      os << "true";
      break;
    case BoolExpr::Kind::False:
      os << "false";
      break;
    case BoolExpr::Kind::Var:
      os << e.var;
      break;
    case BoolExpr::Kind::Not:
      os << '!';
      render_bool(e.args[0], prec + 1, os);
      break;
    case BoolExpr::Kind::And:
      render_bool(e.args[0], prec, os);
      os << " && ";
      render_bool(e.args[1], prec + 1, os);
      break;
    case BoolExpr::Kind::Or:
      render_bool(e.args[0], prec, os);
      os << " || ";
      render_bool(e.args[1], prec + 1, os);
      break;
  }
  if (parens) os << ')';
}

void render(const Term& t, std::ostream& os) {
  switch (t.kind) {
    case Term::Kind::Symbol:
      os << t.name;
      return;
    case Term::Kind::Var:
      os << '$' << t.name;
      return;
    case Term::Kind::Record:
    case Term::Kind::Choice: {
      bool choice = t.kind == Term::Kind::Choice;
      os << (choice ? "(:" : "{");
      auto es = sorted_elements(t);
      bool first = true;
      for (const auto* e : es) {
        os << (first ? (choice ? " " : "") : ", ");
        first = false;
        os << e->label;
        if (!e->guard.is_const(true)) {
          os << '(';
          render_bool(e->guard, 0, os);
          os << ')';
        }
        os << ": ";
        render(e->term, os);
      }
      if (t.tail) {
        if (!first) os << ' ';
        if (choice && first) os << ' ';
        os << "| $" << *t.tail;
      }
      os << (choice ? " :)" : "}");
      return;
    }
  }
}

}  // namespace

Term parse_term(const std::string& text) {
  Parser p(text);
  Term t = p.term();
  if (!p.lex.at_end()) p.lex.fail("trailing input after term");
  return t;
}

std::string render_term(const Term& t) {
  std::ostringstream os;
  render(t, os);
  return os.str();
}

std::string render_bool_expr(const BoolExpr& e) {
  std::ostringstream os;
  render_bool(e, 0, os);
  return os.str();
}

BoolExpr parse_bool_expr(const std::string& text) {
  Parser p(text);
  BoolExpr e = p.bool_or();
  if (!p.lex.at_end()) p.lex.fail("trailing input after expression");
  return e;
}

}  // namespace mdlcfg
