#include "lf/ledger.hpp"

namespace lf {

namespace {

[[noreturn]] void fail(RuntimeErrorClass c, const std::string& msg) {
  throw RuntimeError(c, msg);
}

std::set<std::string> set_union(const std::set<std::string>& a,
                                const std::set<std::string>& b) {
  std::set<std::string> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool is_subset(const std::set<std::string>& sub,
               const std::set<std::string>& super) {
  for (const auto& x : sub)
    if (!super.count(x)) return false;
  return true;
}

bool intersects(const std::set<std::string>& a,
                const std::set<std::string>& b) {
  for (const auto& x : a)
    if (b.count(x)) return true;
  return false;
}

std::string party_set_string(const std::set<std::string>& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : s) {
    if (!first) out += ",";
    out += p;
    first = false;
  }
  return out + "}";
}

}  // namespace

std::set<std::string> action_informees(const ActionPtr& a) {
  return std::visit(
      [](const auto& n) -> std::set<std::string> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CreateA>) {
          return set_union(n.signatories, n.observers);
        } else if constexpr (std::is_same_v<T, ExerciseA>) {
          return set_union(set_union(n.signatories, n.controllers),
                           n.choice_observers);
        } else {
          return set_union(n.signatories, n.observers);
        }
      },
      a->node);
}

Transaction project_transaction(const Transaction& tx,
                                const std::string& party) {
  Transaction out;
  for (const ActionPtr& a : tx) {
    if (action_informees(a).count(party)) {
      out.push_back(a);
    } else if (auto* ex = std::get_if<ExerciseA>(&a->node)) {
      Transaction inner = project_transaction(ex->consequences, party);
      out.insert(out.end(), inner.begin(), inner.end());
    }
  }
  return out;
}

void check_authorization(const std::set<std::string>& actors,
                         const Transaction& tx) {
  for (const ActionPtr& a : tx) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CreateA>) {
            if (!is_subset(n.signatories, actors))
              fail(RuntimeErrorClass::AuthorizationError,
                   "create #" + std::to_string(n.cid) +
                       " requires signatories " +
                       party_set_string(n.signatories) +
                       " but authorizers are " + party_set_string(actors));
          } else if constexpr (std::is_same_v<T, ExerciseA>) {
            if (!is_subset(n.controllers, actors))
              fail(RuntimeErrorClass::AuthorizationError,
                   "exercise of " + n.choice + " on #" +
                       std::to_string(n.cid) + " requires controllers " +
                       party_set_string(n.controllers) +
                       " but authorizers are " + party_set_string(actors));
            check_authorization(set_union(n.signatories, n.controllers),
                                n.consequences);
          } else {
            if (!intersects(actors, set_union(n.signatories, n.observers)))
              fail(RuntimeErrorClass::AuthorizationError,
                   "fetch of #" + std::to_string(n.cid) +
                       " requires a stakeholder among " +
                       party_set_string(set_union(n.signatories, n.observers)) +
                       "; authorizers are " + party_set_string(actors));
          }
        },
        a->node);
  }
}

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  fail(RuntimeErrorClass::ValidationError, msg);
}

const ContractInfo& lookup_active(const LedgerState& state, std::int64_t cid,
                                  const QualName& tmpl) {
  auto it = state.contracts.find(cid);
  if (it == state.contracts.end())
    invalid("transaction uses unknown contract #" + std::to_string(cid));
  if (!it->second.active)
    invalid("transaction uses archived contract #" + std::to_string(cid));
  if (!(it->second.tmpl == tmpl))
    invalid("contract #" + std::to_string(cid) + " is a " +
            it->second.tmpl.str() + ", not a " + tmpl.str());
  return it->second;
}

void validate_action(Interpreter& interp, const ActionPtr& a,
                     LedgerState& state) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CreateA>) {
          auto f = interp.template_facets(n.tmpl, n.arg);
          if (!f.ensure_ok)
            invalid("recorded create #" + std::to_string(n.cid) +
                    " violates the ensure clause");
          if (f.signatories.empty())
            invalid("recorded create #" + std::to_string(n.cid) +
                    " has no signatories");
          if (f.signatories != n.signatories || f.observers != n.observers)
            invalid("recorded parties of create #" + std::to_string(n.cid) +
                    " do not match the template clauses");
          if (n.cid != state.next_id)
            invalid("create allocated #" + std::to_string(n.cid) +
                    " but replay allocates #" + std::to_string(state.next_id));
          state.next_id++;
          state.contracts[n.cid] =
              ContractInfo{n.tmpl, n.arg, n.signatories, n.observers, true};
        } else if constexpr (std::is_same_v<T, ExerciseA>) {
          const ContractInfo contract = lookup_active(state, n.cid, n.tmpl);
          if (contract.signatories != n.signatories ||
              contract.observers != n.observers)
            invalid("recorded stakeholders of exercise on #" +
                    std::to_string(n.cid) + " do not match the contract");
          const TemplateDef* t = interp.store().find_template(n.tmpl);
          if (!t) invalid("unknown template " + n.tmpl.str());
          const ChoiceDef* ch = t->find_choice(n.choice);
          if (!ch) invalid("unknown choice " + n.choice);
          if (ch->kind != n.kind)
            invalid("recorded consuming flag of " + n.choice +
                    " does not match the choice");
          Env env = Env{}
                        .extend(t->param_var, contract.arg)
                        .extend(ch->arg_var, n.arg);
          auto controllers = party_set(interp.eval(env, ch->controllers));
          auto choice_obs = party_set(interp.eval(env, ch->choice_observers));
          if (controllers != n.controllers || choice_obs != n.choice_observers)
            invalid("recorded controllers of exercise on #" +
                    std::to_string(n.cid) + " do not match the choice clauses");
          if (ch->kind == ChoiceKind::Consuming)
            state.contracts[n.cid].active = false;
          ValuePtr body = interp.eval(env, ch->body);
          auto inner = contract.signatories;
          inner.insert(controllers.begin(), controllers.end());
          auto r = interp.interpret(body, inner, state);
          if (!transaction_equal(r.tx, n.consequences))
            invalid("replayed consequences of exercise on #" +
                    std::to_string(n.cid) +
                    " differ from the recorded transaction");
        } else {
          const ContractInfo& contract = lookup_active(state, n.cid, n.tmpl);
          if (contract.signatories != n.signatories ||
              contract.observers != n.observers)
            invalid("recorded stakeholders of fetch #" +
                    std::to_string(n.cid) + " do not match the contract");
        }
      },
      a->node);
}

}  // namespace

LedgerState validate_transaction(const PackageStore& store,
                                 const Transaction& tx,
                                 const LedgerState& prior) {
  Interpreter interp(store);
  LedgerState replay = prior;
  for (const ActionPtr& a : tx) validate_action(interp, a, replay);
  return replay;
}

Ledger::SubmitResult Ledger::submit(const std::set<std::string>& actors,
                                    const ValuePtr& update) {
  Interpreter interp(store_);
  LedgerState working = state_;
  auto r = interp.interpret(update, actors, working);
  validate_transaction(store_, r.tx, state_);
  check_authorization(actors, r.tx);
  state_ = std::move(working);
  log_.push_back(Commit{actors, r.tx});
  return SubmitResult{std::move(r.value), std::move(r.tx)};
}

Transaction Ledger::projection(const std::string& party) const {
  Transaction out;
  for (const Commit& c : log_) {
    Transaction part = project_transaction(c.tx, party);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace lf
