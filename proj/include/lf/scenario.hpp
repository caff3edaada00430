#pragma once

#include <string>
#include <vector>

#include "lf/ledger.hpp"
#include "lf/parser.hpp"

namespace lf {

struct RunOptions {
  bool trace = false;           // print each committed tree
  std::string project_party;    // if set, print this party's view per commit
};

struct RunReport {
  int exit_code = 0;  // 0 all steps as specified, 2 on step failure
  std::vector<std::string> lines;  // human-readable output in step order
  std::string json_text;           // machine-readable report
};

RunReport run_scenario(const PackageStore& store, const Scenario& scenario,
                       const RunOptions& opts = {});

}  // namespace lf
