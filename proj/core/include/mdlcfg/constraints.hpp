#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mdlcfg/derivation.hpp"
#include "mdlcfg/term.hpp"

namespace mdlcfg {

struct PortRef {
  std::string service;
  bool is_input = false;
  int port = 1;

  std::string text() const {
    return service + (is_input ? ".in" : ".out") + std::to_string(port);
  }
};

struct Channel {
  PortRef from;  // output port
  PortRef to;    // input port
  std::string id() const { return from.text() + "->" + to.text(); }
};

struct Topology {
  std::vector<Channel> channels;
};

/// Seniority constraint junior <= senior with a diagnostic origin
/// (a channel id or "intra:<service>").
struct Constraint {
  Term junior;
  Term senior;
  std::string origin;
};

struct ConstraintSet {
  std::vector<Constraint> constraints;
  std::set<std::string> bool_vars;
  std::set<std::string> term_vars;
};

/// Parses the topology format, one channel per line:
///
///   channel <svc>.out<k> -> <svc>.in<m>
///
/// Fan-in and fan-out are rejected: every endpoint appears at most once.
Topology load_topology(const std::string& text);

/// Parses an interface bundle:
///
///   service <name>
///   in<k> = <mdl-term>
///   out<k> = <mdl-term>
///   constraint $v1 <= $v2
DerivedService parse_bundle(const std::string& text);

/// Inverse of parse_bundle, canonically rendered.
std::string render_bundle(const DerivedService& svc);

/// One constraint per channel (output interface junior, input interface
/// senior) followed by every service's intra-service constraints. Unwired
/// ports contribute nothing. Deterministic: channel constraints in topology
/// order, intra constraints by service name.
ConstraintSet generate(const Topology& top,
                       const std::map<std::string, DerivedService>& services);

std::string render_constraints(const ConstraintSet& cs);

}  // namespace mdlcfg
