#include "mdlcfg/derivation.hpp"

#include <algorithm>
#include <sstream>

#include "mdlcfg/parser.hpp"

namespace mdlcfg {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Content lines with comments stripped, paired with 1-based line numbers.
std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> out;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (!line.empty()) out.emplace_back(no, line);
  }
  return out;
}

[[noreturn]] void line_fail(int no, const std::string& msg) {
  throw MdlError("line " + std::to_string(no) + ": " + msg);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::vector<Param> parse_params(int no, const std::string& inside) {
  std::vector<Param> params;
  if (trim(inside).empty()) return params;
  for (const auto& piece : split(inside, ',')) {
    auto parts = split(piece, ':');
    if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
      line_fail(no, "expected <param>:<type>, got '" + piece + "'");
    for (const auto& p : params)
      if (p.name == parts[0]) line_fail(no, "duplicate parameter '" + parts[0] + "'");
    params.push_back({parts[0], parts[1]});
  }
  return params;
}

// Splits "name(<params>)" into name and the inside of the parentheses.
std::pair<std::string, std::string> parse_signature(int no, const std::string& s) {
  auto open = s.find('(');
  auto close = s.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open)
    line_fail(no, "expected <name>(<params>)");
  std::string name = trim(s.substr(0, open));
  if (name.empty()) line_fail(no, "missing function name");
  return {name, s.substr(open + 1, close - open - 1)};
}

int parse_port(int no, const std::string& s) {
  try {
    size_t used = 0;
    int p = std::stoi(s, &used);
    if (used != s.size() || p < 1) throw std::invalid_argument("");
    return p;
  } catch (const std::exception&) {
    line_fail(no, "bad port index '" + s + "'");
  }
}

std::string bool_var_name(const ServiceStub& stub, const std::string& fn) {
  return stub.name + "_b_" + fn;
}

std::string tail_var_name(const ServiceStub& stub, const std::string& fn) {
  return stub.name + "_t_" + fn;
}

Term params_record(const std::vector<Param>& params, const std::string& tail) {
  std::vector<Element> es;
  for (const auto& p : params)
    es.push_back({p.name, BoolExpr::constant(true), Term::symbol(p.type)});
  return Term::record(std::move(es), tail);
}

}  // namespace

ServiceStub parse_stub(const std::string& text) {
  ServiceStub stub;
  bool have_service = false;
  for (const auto& [no, line] : content_lines(text)) {
    std::istringstream is(line);
    std::string kw;
    is >> kw;
    if (kw == "service") {
      if (have_service) line_fail(no, "duplicate service line");
      is >> stub.name;
      if (stub.name.empty()) line_fail(no, "missing service name");
      have_service = true;
    } else if (kw == "in") {
      std::string port, rest;
      is >> port;
      std::getline(is, rest);
      ProcessingFn fn;
      fn.port = parse_port(no, port);
      auto [name, inside] = parse_signature(no, trim(rest));
      fn.name = name;
      fn.params = parse_params(no, inside);
      stub.inputs.push_back(std::move(fn));
    } else if (kw == "salvo") {
      std::string port, rest;
      is >> port;
      std::getline(is, rest);
      rest = trim(rest);
      auto from = rest.rfind(" from ");
      if (from == std::string::npos) line_fail(no, "salvo is missing a 'from' clause");
      Salvo s;
      s.port = parse_port(no, port);
      auto [name, inside] = parse_signature(no, trim(rest.substr(0, from)));
      s.name = name;
      s.params = parse_params(no, inside);
      for (const auto& caller : split(rest.substr(from + 6), ',')) {
        if (caller.empty()) line_fail(no, "empty caller name");
        s.callers.insert(caller);
      }
      if (s.callers.empty()) line_fail(no, "salvo has no callers");
      stub.salvos.push_back(std::move(s));
    } else {
      line_fail(no, "unknown directive '" + kw + "'");
    }
  }
  if (!have_service) throw MdlError("stub is missing a 'service' line");

  std::set<std::string> names;
  for (const auto& fn : stub.inputs)
    if (!names.insert(fn.name).second)
      throw MdlError("duplicate function '" + fn.name + "' in service " + stub.name);
  for (const auto& s : stub.salvos)
    if (!names.insert(s.name).second)
      throw MdlError("duplicate function '" + s.name + "' in service " + stub.name);
  for (const auto& s : stub.salvos)
    for (const auto& caller : s.callers) {
      bool known = std::any_of(stub.inputs.begin(), stub.inputs.end(),
                               [&](const ProcessingFn& f) { return f.name == caller; });
      if (!known)
        throw MdlError("salvo '" + s.name + "' cites unknown caller '" + caller + "'");
    }
  return stub;
}

ShellSpec parse_shell(const std::string& text) {
  ShellSpec shell;
  bool have_header = false;
  for (const auto& [no, line] : content_lines(text)) {
    std::istringstream is(line);
    std::string kw;
    is >> kw;
    if (kw == "shell") {
      is >> shell.service;
      if (shell.service.empty()) line_fail(no, "missing service name");
      have_header = true;
    } else if (kw == "merge") {
      // merge <ch>[,<ch>...] -> in <core-port>
      std::string chans, arrow, in_kw, port;
      is >> chans >> arrow >> in_kw >> port;
      if (arrow != "->" || in_kw != "in") line_fail(no, "expected 'merge <ch,...> -> in <port>'");
      int core = parse_port(no, port);
      for (const auto& ch : split(chans, ','))
        shell.input_merges[core].insert(parse_port(no, ch));
    } else if (kw == "route") {
      // route out <core-port> -> <ch> [rename <old>=<new>[,...]]
      std::string out_kw, port, arrow, ch;
      is >> out_kw >> port >> arrow >> ch;
      if (out_kw != "out" || arrow != "->")
        line_fail(no, "expected 'route out <port> -> <channel> [rename ...]'");
      ShellRoute route;
      route.core_port = parse_port(no, port);
      route.channel = parse_port(no, ch);
      std::string rename_kw;
      if (is >> rename_kw) {
        if (rename_kw != "rename") line_fail(no, "expected 'rename'");
        std::string maps;
        is >> maps;
        std::set<std::string> targets;
        for (const auto& pair : split(maps, ',')) {
          auto kv = split(pair, '=');
          if (kv.size() != 2 || kv[0].empty() || kv[1].empty())
            line_fail(no, "expected <old>=<new> in rename");
          if (route.renames.count(kv[0]))
            line_fail(no, "label '" + kv[0] + "' renamed twice");
          if (!targets.insert(kv[1]).second)
            line_fail(no, "rename map is not injective: '" + kv[1] + "' used twice");
          route.renames[kv[0]] = kv[1];
        }
      }
      shell.output_routes.push_back(std::move(route));
    } else {
      line_fail(no, "unknown directive '" + kw + "'");
    }
  }
  if (!have_header) throw MdlError("shell is missing a 'shell' line");
  return shell;
}

DerivedService derive_interfaces(const ServiceStub& stub) {
  DerivedService svc;
  svc.name = stub.name;
  const std::string inherit = stub.name + "_inherit";

  std::set<int> in_ports = {1};
  for (const auto& fn : stub.inputs) in_ports.insert(fn.port);
  std::set<int> out_ports = {1};
  for (const auto& s : stub.salvos) out_ports.insert(s.port);

  for (int port : in_ports) {
    std::vector<Element> es;
    for (const auto& fn : stub.inputs) {
      if (fn.port != port) continue;
      es.push_back({fn.name, BoolExpr::variable(bool_var_name(stub, fn.name)),
                    params_record(fn.params, tail_var_name(stub, fn.name))});
    }
    svc.input_ifaces[port] =
        Term::choice(std::move(es), port == 1 ? std::optional<std::string>(inherit)
                                              : std::nullopt);
  }
  for (int port : out_ports) {
    std::vector<Element> es;
    for (const auto& s : stub.salvos) {
      if (s.port != port) continue;
      BoolExpr guard;
      bool first = true;
      for (const auto& caller : s.callers) {  // std::set: lexicographic order
        BoolExpr b = BoolExpr::variable(bool_var_name(stub, caller));
        guard = first ? b : BoolExpr::disjunction(std::move(guard), std::move(b));
        first = false;
      }
      es.push_back({s.name, std::move(guard),
                    params_record(s.params, tail_var_name(stub, s.name))});
    }
    svc.output_ifaces[port] =
        Term::choice(std::move(es), port == 1 ? std::optional<std::string>(inherit)
                                              : std::nullopt);
  }

  for (const auto& s : stub.salvos)
    for (const auto& caller : s.callers)
      svc.intra_constraints.emplace_back(tail_var_name(stub, caller),
                                         tail_var_name(stub, s.name));
  std::sort(svc.intra_constraints.begin(), svc.intra_constraints.end());
  return svc;
}

namespace {

Term rename_top_labels(const Term& iface, const std::map<std::string, std::string>& renames,
                       const std::string& context) {
  for (const auto& [old_label, new_label] : renames)
    if (!iface.find(old_label))
      throw MdlError(context + ": rename names label '" + old_label +
                     "' absent from the core interface");
  Term out = iface;
  for (auto& e : out.elements) {
    auto it = renames.find(e.label);
    if (it != renames.end()) e.label = it->second;
  }
  std::set<std::string> labels;
  for (const auto& e : out.elements)
    if (!labels.insert(e.label).second)
      throw MdlError(context + ": rename produces duplicate label '" + e.label + "'");
  return out;
}

}  // namespace

DerivedService apply_shell(const DerivedService& core, const ShellSpec& shell) {
  DerivedService out;
  out.name = core.name;
  out.intra_constraints = core.intra_constraints;

  for (const auto& [port, channels] : shell.input_merges) {
    if (!core.input_ifaces.count(port))
      throw MdlError("shell merge refers to unknown core input port " +
                     std::to_string(port));
    (void)channels;
  }
  for (const auto& route : shell.output_routes)
    if (!core.output_ifaces.count(route.core_port))
      throw MdlError("shell route refers to unknown core output port " +
                     std::to_string(route.core_port));

  // Inputs: merged channels each receive a copy of the core interface,
  // untouched core ports keep identity routing.
  std::set<int> merged_core_in;
  for (const auto& [port, channels] : shell.input_merges) {
    merged_core_in.insert(port);
    for (int ch : channels) {
      if (out.input_ifaces.count(ch))
        throw MdlError("external input channel " + std::to_string(ch) +
                       " is assigned twice");
      out.input_ifaces[ch] = core.input_ifaces.at(port);
    }
  }
  for (const auto& [port, iface] : core.input_ifaces) {
    if (merged_core_in.count(port)) continue;
    if (out.input_ifaces.count(port))
      throw MdlError("external input channel " + std::to_string(port) +
                     " is assigned twice");
    out.input_ifaces[port] = iface;
  }

  // Outputs: explicit routes with renaming, then identity for unrouted ports.
  std::set<int> routed_core_out;
  for (const auto& route : shell.output_routes) {
    routed_core_out.insert(route.core_port);
    if (out.output_ifaces.count(route.channel))
      throw MdlError("two routes assign external output channel " +
                     std::to_string(route.channel));
    out.output_ifaces[route.channel] =
        rename_top_labels(core.output_ifaces.at(route.core_port), route.renames,
                          core.name + " out " + std::to_string(route.core_port));
  }
  for (const auto& [port, iface] : core.output_ifaces) {
    if (routed_core_out.count(port)) continue;
    if (out.output_ifaces.count(port))
      throw MdlError("two routes assign external output channel " +
                     std::to_string(port));
    out.output_ifaces[port] = iface;
  }
  return out;
}

namespace {

void collect_var_order(const Term& t, std::vector<std::string>& term_order,
                       std::vector<std::string>& bool_order,
                       std::set<std::string>& seen_term,
                       std::set<std::string>& seen_bool) {
  switch (t.kind) {
    case Term::Kind::Symbol:
      return;
    case Term::Kind::Var:
      if (seen_term.insert(t.name).second) term_order.push_back(t.name);
      return;
    case Term::Kind::Record:
    case Term::Kind::Choice: {
      for (const auto* e : sorted_elements(t)) {
        // structural left-to-right order inside the guard
        std::vector<const BoolExpr*> stack = {&e->guard};
        while (!stack.empty()) {
          const BoolExpr* g = stack.back();
          stack.pop_back();
          if (g->kind == BoolExpr::Kind::Var && seen_bool.insert(g->var).second)
            bool_order.push_back(g->var);
          for (auto it = g->args.rbegin(); it != g->args.rend(); ++it)
            stack.push_back(&*it);
        }
        collect_var_order(e->term, term_order, bool_order, seen_term, seen_bool);
      }
      if (t.tail && seen_term.insert(*t.tail).second) term_order.push_back(*t.tail);
      return;
    }
  }
}

}  // namespace

std::string canonical_signature(const DerivedService& svc) {
  std::vector<std::string> term_order, bool_order;
  std::set<std::string> seen_term, seen_bool;
  for (const auto& [port, iface] : svc.input_ifaces)
    collect_var_order(iface, term_order, bool_order, seen_term, seen_bool);
  for (const auto& [port, iface] : svc.output_ifaces)
    collect_var_order(iface, term_order, bool_order, seen_term, seen_bool);

  std::map<std::string, std::string> term_map, bool_map;
  for (size_t i = 0; i < term_order.size(); ++i)
    term_map[term_order[i]] = "T" + std::to_string(i + 1);
  for (size_t i = 0; i < bool_order.size(); ++i)
    bool_map[bool_order[i]] = "B" + std::to_string(i + 1);

  std::ostringstream os;
  os << "service " << svc.name << "\n";
  for (const auto& [port, iface] : svc.input_ifaces)
    os << "in " << port << " = " << render_term(rename_vars(iface, term_map, bool_map))
       << "\n";
  for (const auto& [port, iface] : svc.output_ifaces)
    os << "out " << port << " = "
       << render_term(rename_vars(iface, term_map, bool_map)) << "\n";

  std::vector<std::string> constraints;
  for (const auto& [junior, senior] : svc.intra_constraints) {
    auto jt = term_map.count(junior) ? term_map.at(junior) : junior;
    auto st = term_map.count(senior) ? term_map.at(senior) : senior;
    constraints.push_back("constraint $" + jt + " <= $" + st);
  }
  std::sort(constraints.begin(), constraints.end());
  for (const auto& c : constraints) os << c << "\n";
  return os.str();
}

}  // namespace mdlcfg
