#include "mdlcfg/emit.hpp"

#include <sstream>

#include "mdlcfg/parser.hpp"

namespace mdlcfg {

namespace {

void collect_record_tails(const Term& t, std::set<std::string>& out) {
  if (!t.is_collection()) return;
  if (t.kind == Term::Kind::Record && t.tail) out.insert(*t.tail);
  for (const auto& e : t.elements) collect_record_tails(e.term, out);
}

std::string field_type_text(const Term& t) {
  return t.kind == Term::Kind::Symbol ? t.name : render_term(t);
}

}  // namespace

ServiceConfig emit_config(const DerivedService& d, const Solution& s) {
  ServiceConfig cfg;
  cfg.service = d.name;

  FreeVars fv;
  std::set<std::string> record_tails;
  for (const auto* ifaces : {&d.input_ifaces, &d.output_ifaces}) {
    for (const auto& [port, term] : *ifaces) {
      FreeVars pf = free_vars(term);
      fv.bool_vars.insert(pf.bool_vars.begin(), pf.bool_vars.end());
      fv.term_vars.insert(pf.term_vars.begin(), pf.term_vars.end());
      collect_record_tails(term, record_tails);
    }
  }

  for (const auto& b : fv.bool_vars) {
    auto it = s.booleans.find(b);
    if (it == s.booleans.end())
      throw MdlError("solution does not cover Boolean variable " + b);
    cfg.bool_defs[b] = it->second;
  }

  for (const auto& v : record_tails) {
    auto it = s.terms.find(v);
    if (it == s.terms.end())
      throw MdlError("solution does not cover term variable $" + v);
    const Term& value = it->second;
    if (value.kind != Term::Kind::Record)
      throw MdlError("record tail $" + v + " is instantiated to a non-record: " +
                     render_term(value));
    std::string decl, use;
    for (const auto* e : sorted_elements(value)) {
      decl += ", " + field_type_text(e->term) + " " + e->label;
      use += ", " + e->label;
    }
    cfg.tail_decl_texts[v] = std::move(decl);
    cfg.tail_use_texts[v] = std::move(use);
  }
  return cfg;
}

std::string format_config(const ServiceConfig& cfg) {
  std::ostringstream os;
  for (const auto& [name, value] : cfg.bool_defs)
    os << "BV_" << name << " = " << (value ? "true" : "false") << "\n";
  for (const auto& [var, text] : cfg.tail_decl_texts) {
    os << "TV_" << var << "_decl = \"" << text << "\"\n";
    os << "TV_" << var << "_use = \"" << cfg.tail_use_texts.at(var) << "\"\n";
  }
  return os.str();
}

std::string format_config_cpp(const ServiceConfig& cfg) {
  std::ostringstream os;
  for (const auto& [name, value] : cfg.bool_defs)
    if (value) os << "#define BV_" << name << "\n";
  for (const auto& [var, text] : cfg.tail_decl_texts) {
    os << "#define TV_" << var << "_decl " << text << "\n";
    os << "#define TV_" << var << "_use " << cfg.tail_use_texts.at(var) << "\n";
  }
  return os.str();
}

}  // namespace mdlcfg
