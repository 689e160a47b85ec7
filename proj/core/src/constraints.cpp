#include "mdlcfg/constraints.hpp"

#include <algorithm>
#include <cctype>
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

// Parses "<svc>.in<k>" / "<svc>.out<k>".
PortRef parse_port_ref(int no, const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) line_fail(no, "expected <service>.<in|out><port>");
  PortRef ref;
  ref.service = s.substr(0, dot);
  std::string rest = s.substr(dot + 1);
  size_t digits;
  if (rest.rfind("in", 0) == 0) {
    ref.is_input = true;
    digits = 2;
  } else if (rest.rfind("out", 0) == 0) {
    ref.is_input = false;
    digits = 3;
  } else {
    line_fail(no, "expected in<k> or out<k> after '.'");
  }
  std::string num = rest.substr(digits);
  try {
    size_t used = 0;
    ref.port = std::stoi(num, &used);
    if (used != num.size() || ref.port < 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    line_fail(no, "bad port index in '" + s + "'");
  }
  return ref;
}

}  // namespace

Topology load_topology(const std::string& text) {
  Topology top;
  std::set<std::string> used_endpoints;
  for (const auto& [no, line] : content_lines(text)) {
    std::istringstream is(line);
    std::string kw, from, arrow, to;
    is >> kw >> from >> arrow >> to;
    if (kw != "channel" || arrow != "->")
      line_fail(no, "expected 'channel <svc>.out<k> -> <svc>.in<m>'");
    Channel ch;
    ch.from = parse_port_ref(no, from);
    ch.to = parse_port_ref(no, to);
    if (ch.from.is_input) line_fail(no, "channel source must be an output port");
    if (!ch.to.is_input) line_fail(no, "channel target must be an input port");
    if (!used_endpoints.insert(ch.from.text()).second)
      line_fail(no, "output port " + ch.from.text() + " is wired twice");
    if (!used_endpoints.insert(ch.to.text()).second)
      line_fail(no, "input port " + ch.to.text() + " is wired twice");
    top.channels.push_back(std::move(ch));
  }
  return top;
}

DerivedService parse_bundle(const std::string& text) {
  DerivedService svc;
  bool have_service = false;
  for (const auto& [no, line] : content_lines(text)) {
    if (line.rfind("service", 0) == 0 &&
        (line.size() == 7 || std::isspace(static_cast<unsigned char>(line[7])))) {
      if (have_service) line_fail(no, "duplicate service line");
      svc.name = trim(line.substr(7));
      if (svc.name.empty()) line_fail(no, "missing service name");
      have_service = true;
      continue;
    }
    if (line.rfind("constraint", 0) == 0) {
      // constraint $v1 <= $v2
      std::istringstream is(line.substr(10));
      std::string junior, op, senior;
      is >> junior >> op >> senior;
      if (op != "<=" || junior.size() < 2 || senior.size() < 2 ||
          junior[0] != '$' || senior[0] != '$')
        line_fail(no, "expected 'constraint $v1 <= $v2'");
      svc.intra_constraints.emplace_back(junior.substr(1), senior.substr(1));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) line_fail(no, "expected '<port> = <term>'");
    std::string key = trim(line.substr(0, eq));
    std::string term_text = line.substr(eq + 1);
    bool input;
    size_t prefix_len;
    if (key.rfind("in", 0) == 0) {
      input = true;
      prefix_len = 2;
    } else if (key.rfind("out", 0) == 0) {
      input = false;
      prefix_len = 3;
    } else {
      line_fail(no, "port name must start with 'in' or 'out'");
    }
    int port;
    try {
      std::string num = key.substr(prefix_len);
      size_t used = 0;
      port = std::stoi(num, &used);
      if (used != num.size() || port < 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      line_fail(no, "bad port name '" + key + "'");
    }
    Term t;
    try {
      t = parse_term(term_text);
    } catch (const MdlError& e) {
      line_fail(no, std::string("bad term: ") + e.what());
    }
    auto& ifaces = input ? svc.input_ifaces : svc.output_ifaces;
    if (ifaces.count(port)) line_fail(no, "duplicate interface '" + key + "'");
    ifaces[port] = std::move(t);
  }
  if (!have_service) throw MdlError("bundle is missing a 'service' line");
  std::sort(svc.intra_constraints.begin(), svc.intra_constraints.end());
  return svc;
}

std::string render_bundle(const DerivedService& svc) {
  std::ostringstream os;
  os << "service " << svc.name << "\n";
  for (const auto& [port, iface] : svc.input_ifaces)
    os << "in" << port << " = " << render_term(iface) << "\n";
  for (const auto& [port, iface] : svc.output_ifaces)
    os << "out" << port << " = " << render_term(iface) << "\n";
  auto intra = svc.intra_constraints;
  std::sort(intra.begin(), intra.end());
  for (const auto& [junior, senior] : intra)
    os << "constraint $" << junior << " <= $" << senior << "\n";
  return os.str();
}

ConstraintSet generate(const Topology& top,
                       const std::map<std::string, DerivedService>& services) {
  ConstraintSet cs;
  auto resolve = [&](const PortRef& ref) -> const Term& {
    auto it = services.find(ref.service);
    if (it == services.end())
      throw MdlError("unknown service '" + ref.service + "' in " + ref.text());
    const auto& ifaces = ref.is_input ? it->second.input_ifaces : it->second.output_ifaces;
    auto pit = ifaces.find(ref.port);
    if (pit == ifaces.end())
      throw MdlError("service '" + ref.service + "' has no port " + ref.text());
    return pit->second;
  };

  for (const auto& ch : top.channels)
    cs.constraints.push_back({resolve(ch.from), resolve(ch.to), ch.id()});

  for (const auto& [name, svc] : services)
    for (const auto& [junior, senior] : svc.intra_constraints)
      cs.constraints.push_back(
          {Term::var(junior), Term::var(senior), "intra:" + name});

  for (const auto& c : cs.constraints) {
    for (const auto* t : {&c.junior, &c.senior}) {
      FreeVars fv = free_vars(*t);
      cs.bool_vars.insert(fv.bool_vars.begin(), fv.bool_vars.end());
      cs.term_vars.insert(fv.term_vars.begin(), fv.term_vars.end());
    }
  }
  return cs;
}

std::string render_constraints(const ConstraintSet& cs) {
  std::ostringstream os;
  for (const auto& c : cs.constraints)
    os << c.origin << ": " << render_term(c.junior) << " <= "
       << render_term(c.senior) << "\n";
  return os.str();
}

}  // namespace mdlcfg
