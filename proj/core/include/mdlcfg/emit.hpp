#pragma once

#include <map>
#include <string>

#include "mdlcfg/derivation.hpp"
#include "mdlcfg/solver.hpp"

namespace mdlcfg {

/// Configuration values for one service: Boolean switches and the textual
/// expansion of each record tail variable.
struct ServiceConfig {
  std::string service;
  std::map<std::string, bool> bool_defs;
  std::map<std::string, std::string> tail_decl_texts;  // ", <type> <label>"...
  std::map<std::string, std::string> tail_use_texts;   // ", <label>"...
};

/// Collects configuration values for the variables appearing in the service's
/// interfaces. Every Boolean variable yields a BV entry; every variable in
/// record-tail position yields a pair of TV texts built from its record
/// instantiation, fields in label order (nil gives empty strings).
///
/// Throws MdlError when the solution misses a variable or assigns a
/// non-record to a record tail.
ServiceConfig emit_config(const DerivedService& d, const Solution& s);

/// Key=value rendering, keys sorted, TV texts double-quoted:
///
///   BV_x = true
///   TV_a_decl = ", string author"
///   TV_a_use = ", author"
std::string format_config(const ServiceConfig& cfg);

/// C-preprocessor rendering: `#define BV_<name>` for true switches only,
/// `#define TV_<var>_decl <text>` / `..._use <text>` for every tail.
std::string format_config_cpp(const ServiceConfig& cfg);

}  // namespace mdlcfg
