// Command-line driver: parse | check | derive | constraints | solve | verify
// | emit | configure. Exit codes: 0 success, 1 unsatisfiable/relation fails,
// 2 bad input.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mdlcfg/constraints.hpp"
#include "mdlcfg/derivation.hpp"
#include "mdlcfg/emit.hpp"
#include "mdlcfg/parser.hpp"
#include "mdlcfg/seniority.hpp"
#include "mdlcfg/solver.hpp"

namespace fs = std::filesystem;
using namespace mdlcfg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitInput = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MdlError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw MdlError("cannot write " + path);
  out << text;
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    spill(out_path, text);
}

// Loads every .ifc bundle and derives every .stub (applying a .shell with the
// same basename when present) from a directory.
std::map<std::string, DerivedService> load_services(const std::string& dir) {
  std::map<std::string, DerivedService> services;
  auto add = [&](DerivedService svc) {
    if (services.count(svc.name))
      throw MdlError("service '" + svc.name + "' defined twice in " + dir);
    services.emplace(svc.name, std::move(svc));
  };
  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end());
  for (const auto& p : entries) {
    if (p.extension() == ".ifc") {
      add(parse_bundle(slurp(p.string())));
    } else if (p.extension() == ".stub") {
      DerivedService svc = derive_interfaces(parse_stub(slurp(p.string())));
      fs::path shell = p;
      shell.replace_extension(".shell");
      if (fs::exists(shell)) svc = apply_shell(svc, parse_shell(slurp(shell.string())));
      add(std::move(svc));
    }
  }
  if (services.empty()) throw MdlError("no .ifc or .stub files in " + dir);
  return services;
}

ConstraintSet load_problem(const std::string& topo_path, const std::string& ifc_dir,
                           std::map<std::string, DerivedService>* services_out = nullptr) {
  Topology top = load_topology(slurp(topo_path));
  auto services = load_services(ifc_dir);
  ConstraintSet cs = generate(top, services);
  if (services_out) *services_out = std::move(services);
  return cs;
}

void report_unsat(const Verdict& v) {
  std::cerr << "unsatisfiable";
  if (!v.failures.empty()) {
    std::cerr << "; failing constraints:";
    for (const auto& f : v.failures) std::cerr << " " << f;
  }
  std::cerr << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"Interface configuration for composed services"};
  app.require_subcommand(1);

  // parse
  auto* parse_cmd = app.add_subcommand("parse", "Validate an .mdl term file");
  std::string parse_file;
  parse_cmd->add_option("file", parse_file, "term file")->required();

  // check
  auto* check_cmd = app.add_subcommand("check", "Test junior <= senior on ground terms");
  std::string check_junior, check_senior;
  check_cmd->add_option("junior", check_junior, "junior term file")->required();
  check_cmd->add_option("senior", check_senior, "senior term file")->required();

  // derive
  auto* derive_cmd = app.add_subcommand("derive", "Derive interfaces from a stub");
  std::string derive_stub, derive_shell, derive_out;
  bool derive_canonical = false;
  derive_cmd->add_option("--stub", derive_stub, "service stub file")->required();
  derive_cmd->add_option("--shell", derive_shell, "shell wrapper file");
  derive_cmd->add_option("-o,--out", derive_out, "output .ifc path");
  derive_cmd->add_flag("--canonical", derive_canonical,
                       "rename fresh variables by first occurrence");

  // constraints
  auto* cons_cmd = app.add_subcommand("constraints", "Print the constraint set");
  std::string cons_topo, cons_dir;
  cons_cmd->add_option("--topo", cons_topo, "topology file")->required();
  cons_cmd->add_option("--ifc-dir", cons_dir, "directory of .ifc/.stub files")->required();

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve the constraint problem");
  std::string solve_topo, solve_dir, solve_out;
  bool solve_prefer_false = false;
  solve_cmd->add_option("--topo", solve_topo, "topology file")->required();
  solve_cmd->add_option("--ifc-dir", solve_dir, "directory of .ifc/.stub files")->required();
  solve_cmd->add_option("-o,--out", solve_out, "output .sol path");
  solve_cmd->add_flag("--prefer-false", solve_prefer_false,
                      "skip greedy true-maximization");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Check a solution against constraints");
  std::string verify_topo, verify_dir, verify_sol;
  verify_cmd->add_option("--topo", verify_topo, "topology file")->required();
  verify_cmd->add_option("--ifc-dir", verify_dir, "directory of .ifc/.stub files")->required();
  verify_cmd->add_option("--sol", verify_sol, "solution file")->required();

  // emit
  auto* emit_cmd = app.add_subcommand("emit", "Emit a service configuration");
  std::string emit_sol, emit_ifc, emit_out;
  bool emit_cpp = false;
  emit_cmd->add_option("--sol", emit_sol, "solution file")->required();
  emit_cmd->add_option("--ifc", emit_ifc, "service .ifc file")->required();
  emit_cmd->add_option("-o,--out", emit_out, "output .cfg path");
  emit_cmd->add_flag("--cpp-header", emit_cpp, "also emit #define lines");

  // configure
  auto* cfg_cmd = app.add_subcommand("configure", "Full pipeline: one .cfg per service");
  std::string cfg_topo, cfg_dir, cfg_out;
  bool cfg_cpp = false;
  cfg_cmd->add_option("--topo", cfg_topo, "topology file")->required();
  cfg_cmd->add_option("--ifc-dir", cfg_dir, "directory of .ifc/.stub files")->required();
  cfg_cmd->add_option("--out", cfg_out, "output directory")->required();
  cfg_cmd->add_flag("--cpp-header", cfg_cpp, "also emit .h headers");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (parse_cmd->parsed()) {
    Term t = parse_term(slurp(parse_file));
    std::cout << render_term(t) << "\n";
    return kExitOk;
  }

  if (check_cmd->parsed()) {
    Term j = parse_term(slurp(check_junior));
    Term s = parse_term(slurp(check_senior));
    if (!j.is_ground() || !s.is_ground())
      throw MdlError("check requires ground terms");
    if (leq(j, s)) {
      std::cout << "junior\n";
      return kExitOk;
    }
    std::cout << "not junior\n";
    return kExitUnsat;
  }

  if (derive_cmd->parsed()) {
    DerivedService svc = derive_interfaces(parse_stub(slurp(derive_stub)));
    if (!derive_shell.empty()) svc = apply_shell(svc, parse_shell(slurp(derive_shell)));
    std::string text =
        derive_canonical ? canonical_signature(svc) : render_bundle(svc);
    write_or_print(derive_out, text);
    return kExitOk;
  }

  if (cons_cmd->parsed()) {
    std::cout << render_constraints(load_problem(cons_topo, cons_dir));
    return kExitOk;
  }

  if (solve_cmd->parsed()) {
    ConstraintSet cs = load_problem(solve_topo, solve_dir);
    SolverConfig config;
    config.prefer_true = !solve_prefer_false;
    Verdict v = solve(cs, config);
    if (v.kind == Verdict::Kind::Diverged) {
      std::cerr << "no fixed point after " << v.rounds << " rounds\n";
      return kExitUnsat;
    }
    if (!v.sat()) {
      report_unsat(v);
      return kExitUnsat;
    }
    write_or_print(solve_out, render_solution(v.solution));
    return kExitOk;
  }

  if (verify_cmd->parsed()) {
    ConstraintSet cs = load_problem(verify_topo, verify_dir);
    Solution s = parse_solution(slurp(verify_sol));
    auto failures = verify(cs, s);
    if (failures.empty()) {
      std::cout << "valid\n";
      return kExitOk;
    }
    std::cerr << "invalid; failing constraints:";
    for (const auto& f : failures) std::cerr << " " << f;
    std::cerr << "\n";
    return kExitUnsat;
  }

  if (emit_cmd->parsed()) {
    DerivedService svc = parse_bundle(slurp(emit_ifc));
    Solution s = parse_solution(slurp(emit_sol));
    ServiceConfig cfg = emit_config(svc, s);
    std::string text = format_config(cfg);
    if (emit_cpp) text += format_config_cpp(cfg);
    write_or_print(emit_out, text);
    return kExitOk;
  }

  // configure
  std::map<std::string, DerivedService> services;
  ConstraintSet cs = load_problem(cfg_topo, cfg_dir, &services);
  Verdict v = solve(cs);
  if (v.kind == Verdict::Kind::Diverged) {
    std::cerr << "no fixed point after " << v.rounds << " rounds\n";
    return kExitUnsat;
  }
  if (!v.sat()) {
    report_unsat(v);
    return kExitUnsat;
  }
  fs::create_directories(cfg_out);
  spill((fs::path(cfg_out) / "solution.sol").string(), render_solution(v.solution));
  for (const auto& [name, svc] : services) {
    ServiceConfig cfg = emit_config(svc, v.solution);
    spill((fs::path(cfg_out) / (name + ".cfg")).string(), format_config(cfg));
    if (cfg_cpp)
      spill((fs::path(cfg_out) / (name + ".h")).string(), format_config_cpp(cfg));
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const MdlError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
