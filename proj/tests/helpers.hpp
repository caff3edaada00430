#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lf/parser.hpp"
#include "lf/typecheck.hpp"

namespace lftest {

inline std::string corpus_path(const std::string& name) {
  return std::string(LF_CORPUS_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline lf::Package parse_corpus(const std::string& name) {
  return lf::parse_package(slurp(corpus_path(name)), name);
}

// Loads (and typechecks) the given corpus packages into one store.
inline lf::PackageStore load_corpus(const std::vector<std::string>& names) {
  std::vector<lf::Package> pkgs;
  for (const auto& n : names) pkgs.push_back(parse_corpus(n));
  lf::PackageStore store;
  lf::load_packages(store, std::move(pkgs));
  return store;
}

inline lf::PackageStore load_text(const std::string& text) {
  lf::PackageStore store;
  std::vector<lf::Package> pkgs;
  pkgs.push_back(lf::parse_package(text, "<test>"));
  lf::load_packages(store, std::move(pkgs));
  return store;
}

}  // namespace lftest
