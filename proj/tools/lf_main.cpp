#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lf/parser.hpp"
#include "lf/scenario.hpp"
#include "lf/typecheck.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitStepFailure = 2;
constexpr int kExitUsage = 3;

bool use_color() {
  const char* v = std::getenv("LF_COLOR");
  return v && std::string(v) == "1";
}

void diagnostic(const std::string& msg) {
  if (use_color())
    std::cerr << "\033[31merror:\033[0m " << msg << '\n';
  else
    std::cerr << "error: " << msg << '\n';
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Parses and typechecks the given package files in dependency order.
lf::PackageStore load_all(const std::vector<std::string>& paths) {
  std::vector<lf::Package> pkgs;
  for (const auto& p : paths) pkgs.push_back(lf::parse_package(slurp(p), p));
  lf::PackageStore store;
  lf::load_packages(store, std::move(pkgs));
  return store;
}

int cmd_check(const std::vector<std::string>& paths) {
  try {
    std::vector<lf::Package> pkgs;
    for (const auto& p : paths) pkgs.push_back(lf::parse_package(slurp(p), p));
    lf::PackageStore store;
    lf::load_packages(store, pkgs);
    for (size_t i = 0; i < paths.size(); ++i)
      std::cout << paths[i] << " " << pkgs[i].id.hex << '\n';
    return kExitOk;
  } catch (const lf::ParseError& e) {
    diagnostic(e.render());
  } catch (const lf::TypeError& e) {
    diagnostic(e.render());
  } catch (const std::exception& e) {
    diagnostic(e.what());
  }
  return kExitCheckFailure;
}

int cmd_hash(const std::string& path) {
  try {
    lf::Package pkg = lf::parse_package(slurp(path), path);
    std::cout << pkg.id.hex << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    diagnostic(e.what());
    return kExitCheckFailure;
  }
}

int cmd_run(const std::vector<std::string>& paths,
            const std::string& scenario_path, bool trace,
            const std::string& project_party, bool json) {
  lf::PackageStore store;
  lf::Scenario scenario;
  try {
    store = load_all(paths);
    scenario = lf::parse_scenario(slurp(scenario_path), scenario_path);
  } catch (const lf::ParseError& e) {
    diagnostic(e.render());
    return kExitCheckFailure;
  } catch (const lf::TypeError& e) {
    diagnostic(e.render());
    return kExitCheckFailure;
  } catch (const std::exception& e) {
    diagnostic(e.what());
    return kExitCheckFailure;
  }
  lf::RunOptions opts;
  opts.trace = trace;
  opts.project_party = project_party;
  lf::RunReport report = lf::run_scenario(store, scenario, opts);
  if (json) {
    std::cout << report.json_text << '\n';
  } else {
    for (const auto& l : report.lines) std::cout << l << '\n';
  }
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lf: load, check, and run ledger packages"};
  app.require_subcommand(1);

  std::vector<std::string> check_paths;
  CLI::App* check = app.add_subcommand("check", "typecheck packages");
  check->add_option("files", check_paths, "package files (.lf)")->required();

  std::string hash_path;
  CLI::App* hash = app.add_subcommand("hash", "print a package's content id");
  hash->add_option("file", hash_path, "package file (.lf)")->required();

  std::vector<std::string> run_paths;
  std::string scenario_path, project_party;
  bool trace = false, json = false;
  CLI::App* run = app.add_subcommand("run", "run a scenario script");
  run->add_option("files", run_paths, "package files (.lf)")->required();
  run->add_option("--scenario", scenario_path, "scenario script (.lfs)")
      ->required();
  run->add_flag("--trace", trace, "print each committed transaction tree");
  run->add_option("--project", project_party,
                  "print this party's view after each commit");
  run->add_flag("--json", json, "emit a machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (check->parsed()) return cmd_check(check_paths);
  if (hash->parsed()) return cmd_hash(hash_path);
  return cmd_run(run_paths, scenario_path, trace, project_party, json);
}
