#pragma once

#include <set>
#include <string>
#include <vector>

#include "lf/interpreter.hpp"

namespace lf {

// Parties that must see an action when it is committed.
// Create/Fetch: signatories + observers; Exercise: signatories + controllers
// + choice observers.
std::set<std::string> action_informees(const ActionPtr& a);

// Keeps each subtree rooted at the first action the party is an informee of;
// below a non-informee exercise, the projections of the consequences are
// spliced in at that level.
Transaction project_transaction(const Transaction& tx, const std::string& party);

// Checks the recorded authority requirements: creates need their signatories,
// fetches a stakeholder, exercises their controllers; exercise consequences
// are checked under the contract's signatories + controllers. Throws
// AuthorizationError on the first violation in pre-order.
void check_authorization(const std::set<std::string>& actors,
                         const Transaction& tx);

// Replays the transaction from `prior`, recomputing every derived fact
// (ensure, signatories, observers, controllers, allocated ids, consequences)
// and comparing with what was recorded. Throws ValidationError on mismatch;
// on success, returns the post-transaction state.
LedgerState validate_transaction(const PackageStore& store,
                                 const Transaction& tx,
                                 const LedgerState& prior);

struct Commit {
  std::set<std::string> actors;
  Transaction tx;
};

class Ledger {
 public:
  explicit Ledger(const PackageStore& store) : store_(store) {}

  const PackageStore& store() const { return store_; }
  const LedgerState& state() const { return state_; }
  const std::vector<Commit>& log() const { return log_; }

  struct SubmitResult {
    ValuePtr value;
    Transaction tx;
  };

  // Interprets the update under the actors' authority, validates the
  // resulting transaction against the current state, and commits it.
  // Throws RuntimeError without changing any state on failure.
  SubmitResult submit(const std::set<std::string>& actors,
                      const ValuePtr& update);

  // Concatenated projection of every committed transaction.
  Transaction projection(const std::string& party) const;

 private:
  const PackageStore& store_;
  LedgerState state_;
  std::vector<Commit> log_;
};

}  // namespace lf
