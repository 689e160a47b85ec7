#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdlcfg/term.hpp"

namespace mdlcfg {

struct Param {
  std::string name;
  std::string type;  // symbol name
};

/// Message entry point of a service core, bound to an input port.
struct ProcessingFn {
  std::string name;
  int port = 1;
  std::vector<Param> params;
};

/// Declared output-producing function, bound to an output port.
struct Salvo {
  std::string name;
  int port = 1;
  std::vector<Param> params;
  std::set<std::string> callers;  // processing-function names
};

/// Declarative description of a service core.
struct ServiceStub {
  std::string name;
  std::vector<ProcessingFn> inputs;
  std::vector<Salvo> salvos;
};

struct ShellRoute {
  int core_port = 1;
  int channel = 1;
  std::map<std::string, std::string> renames;  // old label -> new label
};

/// Context-specific wrapper: merges external input channels into core input
/// ports and routes/renames core output ports onto external channels.
struct ShellSpec {
  std::string service;
  std::map<int, std::set<int>> input_merges;  // core input port -> channels
  std::vector<ShellRoute> output_routes;
};

/// Per-port interfaces of a service plus its intra-service constraints
/// (junior tail variable, senior tail variable).
struct DerivedService {
  std::string name;
  std::map<int, Term> input_ifaces;
  std::map<int, Term> output_ifaces;
  std::vector<std::pair<std::string, std::string>> intra_constraints;
};

/// Parses the line-oriented stub format:
///
///   service <name>
///   in <port> <fn>(<param>:<type>, ...)
///   salvo <port> <name>(<param>:<type>, ...) from <fn>[,<fn>...]
ServiceStub parse_stub(const std::string& text);

/// Parses the shell format:
///
///   shell <service>
///   merge <ch>[,<ch>...] -> in <core-port>
///   route out <core-port> -> <ch> [rename <old>=<new>[,...]]
ShellSpec parse_shell(const std::string& text);

/// Builds the per-port interfaces of a stub. Every processing function
/// becomes a guarded input-choice element with a fresh record tail, every
/// salvo a guarded output-choice element whose guard is the disjunction of
/// its callers' guards. Input port 1 and output port 1 share a fresh choice
/// tail; one tail constraint is generated per caller/salvo pair. Fresh names
/// are deterministic functions of the service and function names.
DerivedService derive_interfaces(const ServiceStub& stub);

/// Applies shell merges and routes; port numbers in the result refer to the
/// external channels. Unrouted core ports keep identity routing.
DerivedService apply_shell(const DerivedService& core, const ShellSpec& shell);

/// Canonical textual form of a derived service with fresh variables renamed
/// by first occurrence (B1, B2, ... and T1, T2, ...). Two derivations equal
/// up to variable naming canonicalize identically.
std::string canonical_signature(const DerivedService& svc);

}  // namespace mdlcfg
