#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lf/ast.hpp"

namespace lf {

struct ParseError : std::runtime_error {
  Span span;
  ParseError(Span sp, const std::string& msg)
      : std::runtime_error(msg), span(std::move(sp)) {}
  std::string render() const;
};

// Scenario scripts (.lfs). Steps run in order against a fresh ledger.

struct Command {
  enum class Tag { Create, Exercise } tag;
  QualName template_ref;
  std::string choice;   // Exercise only
  std::string cid_ref;  // Exercise only: a bind-name introduced earlier
  ExprPtr arg;          // create argument / choice argument
};

struct TreeSketch {
  enum class Tag { Create, Exercise, Fetch } tag;
  std::int64_t cid = 0;
  std::vector<TreeSketch> children;  // Exercise consequences
};

struct ScenarioStep {
  enum class Tag {
    Submit, SubmitMustFail, AssertActive, AssertArchived, Project
  } tag;
  std::vector<std::string> actors;     // Submit / SubmitMustFail
  Command command;                     // Submit / SubmitMustFail
  std::string bind_name;               // Submit, optional
  std::string expected_error;          // SubmitMustFail: error-class name
  std::string cid_ref;                 // AssertActive / AssertArchived
  QualName expected_template;          // AssertActive
  std::string party;                   // Project
  std::vector<TreeSketch> expected;    // Project, optional sketch of roots
  bool has_sketch = false;
  Span span;
};

struct Scenario {
  std::vector<ScenarioStep> steps;
};

// Parses the canonical textual package format. Definitions are stored in
// canonical (sorted) order and every template gets its implicit Archive
// choice appended; a user-defined Archive is rejected. The package id is
// filled in from the content hash.
Package parse_package(const std::string& text, const std::string& filename = "<input>");

Scenario parse_scenario(const std::string& text, const std::string& filename = "<input>");

// Inverse of parse_package: emits the canonical form (fixed layout, sorted
// definitions, implicit Archive omitted).
std::string pretty_package(const Package& pkg);

std::string pretty_type(const TypePtr& t);
std::string pretty_expr(const ExprPtr& e);

}  // namespace lf
