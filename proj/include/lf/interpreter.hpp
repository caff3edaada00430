#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "lf/store.hpp"
#include "lf/value.hpp"

namespace lf {

enum class RuntimeErrorClass {
  Abort,
  DivideByZero,
  Overflow,
  EnsureFailed,
  EmptySignatories,
  ContractNotFound,
  ContractArchived,
  TemplateMismatch,
  AuthorizationError,
  ValidationError,
  Wrong,  // internal invariant breach (ill-typed program reached the evaluator)
};

const char* runtime_error_class_name(RuntimeErrorClass c);

struct RuntimeError : std::runtime_error {
  RuntimeErrorClass cls;
  RuntimeError(RuntimeErrorClass c, const std::string& msg)
      : std::runtime_error(msg), cls(c) {}
  std::string render() const;  // "class: message"
};

// ---------------------------------------------------------------------------
// Ledger actions and transactions
// ---------------------------------------------------------------------------

struct Action;
using ActionPtr = std::shared_ptr<const Action>;
using Transaction = std::vector<ActionPtr>;

struct CreateA {
  std::int64_t cid;
  QualName tmpl;
  ValuePtr arg;
  std::set<std::string> signatories, observers;
};
struct ExerciseA {
  std::int64_t cid;
  QualName tmpl;
  std::string choice;
  ChoiceKind kind = ChoiceKind::Consuming;
  ValuePtr arg;
  std::set<std::string> controllers, choice_observers;
  std::set<std::string> signatories, observers;  // of the exercised contract
  Transaction consequences;
};
struct FetchA {
  std::int64_t cid;
  QualName tmpl;
  std::set<std::string> signatories, observers;
};

struct Action {
  std::variant<CreateA, ExerciseA, FetchA> node;
};

template <class Node>
ActionPtr mk_action(Node n) {
  auto a = std::make_shared<Action>();
  a->node = std::move(n);
  return a;
}

bool action_equal(const ActionPtr& a, const ActionPtr& b);
bool transaction_equal(const Transaction& a, const Transaction& b);

// ---------------------------------------------------------------------------
// Contract store state
// ---------------------------------------------------------------------------

struct ContractInfo {
  QualName tmpl;
  ValuePtr arg;
  std::set<std::string> signatories, observers;
  bool active = true;
};

struct LedgerState {
  std::map<std::int64_t, ContractInfo> contracts;
  std::int64_t next_id = 1;  // contract ids are allocated as #1, #2, ...
};

// ---------------------------------------------------------------------------
// Evaluation and update interpretation
// ---------------------------------------------------------------------------

class Interpreter {
 public:
  explicit Interpreter(const PackageStore& store) : store_(store) {}

  const PackageStore& store() const { return store_; }

  // Call-by-value, left-to-right. Throws RuntimeError.
  ValuePtr eval(const Env& env, const ExprPtr& e);

  struct UpdateResult {
    ValuePtr value;
    Transaction tx;
  };

  // Interprets a suspended update against `state`, mutating it in place and
  // recording the transaction. `authorizers` is checked on the fly:
  // create needs its signatories, fetch one of its stakeholders, exercise its
  // controllers; exercise consequences run under signatories + controllers.
  UpdateResult interpret(const ValuePtr& update,
                         const std::set<std::string>& authorizers,
                         LedgerState& state);

  // Computed template facets for a would-be contract argument.
  struct TemplateFacets {
    bool ensure_ok;
    std::set<std::string> signatories, observers;
  };
  TemplateFacets template_facets(const QualName& tmpl, const ValuePtr& arg);

 private:
  const PackageStore& store_;
};

}  // namespace lf
