#include "lf/interpreter.hpp"

#include <limits>
#include <sstream>

#include "lf/decimal.hpp"

namespace lf {

const char* runtime_error_class_name(RuntimeErrorClass c) {
  switch (c) {
    case RuntimeErrorClass::Abort: return "Abort";
    case RuntimeErrorClass::DivideByZero: return "DivideByZero";
    case RuntimeErrorClass::Overflow: return "Overflow";
    case RuntimeErrorClass::EnsureFailed: return "EnsureFailed";
    case RuntimeErrorClass::EmptySignatories: return "EmptySignatories";
    case RuntimeErrorClass::ContractNotFound: return "ContractNotFound";
    case RuntimeErrorClass::ContractArchived: return "ContractArchived";
    case RuntimeErrorClass::TemplateMismatch: return "TemplateMismatch";
    case RuntimeErrorClass::AuthorizationError: return "AuthorizationError";
    case RuntimeErrorClass::ValidationError: return "ValidationError";
    case RuntimeErrorClass::Wrong: return "Wrong";
  }
  return "?";
}

std::string RuntimeError::render() const {
  return std::string(runtime_error_class_name(cls)) + ": " + what();
}

namespace {

[[noreturn]] void fail(RuntimeErrorClass c, const std::string& msg) {
  throw RuntimeError(c, msg);
}

[[noreturn]] void wrong(const std::string& msg) {
  fail(RuntimeErrorClass::Wrong, msg);
}

template <class T>
const T& expect(const ValuePtr& v, const char* what) {
  const T* p = std::get_if<T>(&v->node);
  if (!p) wrong(std::string("expected ") + what);
  return *p;
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

ValuePtr eval_builtin(const EBuiltin& b, const std::vector<ValuePtr>& args) {
  auto as_i = [&](size_t i) { return expect<Int64V>(args[i], "Int64").i; };
  auto as_d = [&](size_t i) { return expect<DecimalV>(args[i], "Decimal").d; };
  auto as_b = [&](size_t i) { return expect<BoolV>(args[i], "Bool").b; };
  auto boolean = [](bool v) { return mk_value(BoolV{v}); };
  auto int64 = [](std::int64_t v) { return mk_value(Int64V{v}); };
  auto dec_result = [](std::optional<DecimalLit> r) {
    if (!r) fail(RuntimeErrorClass::Overflow, "decimal out of range");
    return mk_value(DecimalV{*r});
  };
  const std::string& n = b.name;

  if (n == "addi" || n == "subi" || n == "muli") {
    std::int64_t r;
    bool ov = n == "addi"   ? __builtin_add_overflow(as_i(0), as_i(1), &r)
              : n == "subi" ? __builtin_sub_overflow(as_i(0), as_i(1), &r)
                            : __builtin_mul_overflow(as_i(0), as_i(1), &r);
    if (ov) fail(RuntimeErrorClass::Overflow, n + " overflows Int64");
    return int64(r);
  }
  if (n == "divi" || n == "modi") {
    std::int64_t a = as_i(0), d = as_i(1);
    if (d == 0) fail(RuntimeErrorClass::DivideByZero, n + " by zero");
    if (a == std::numeric_limits<std::int64_t>::min() && d == -1)
      fail(RuntimeErrorClass::Overflow, n + " overflows Int64");
    return int64(n == "divi" ? a / d : a % d);
  }
  if (n == "lti") return boolean(as_i(0) < as_i(1));
  if (n == "lei") return boolean(as_i(0) <= as_i(1));
  if (n == "gti") return boolean(as_i(0) > as_i(1));
  if (n == "gei") return boolean(as_i(0) >= as_i(1));
  if (n == "eqi") return boolean(as_i(0) == as_i(1));
  if (n == "addd") return dec_result(decimal_add(as_d(0), as_d(1)));
  if (n == "subd") return dec_result(decimal_sub(as_d(0), as_d(1)));
  if (n == "muld") return dec_result(decimal_mul(as_d(0), as_d(1)));
  if (n == "divd") {
    if (as_d(1).scaled == 0)
      fail(RuntimeErrorClass::DivideByZero, "divd by zero");
    return dec_result(decimal_div(as_d(0), as_d(1)));
  }
  if (n == "ltd") return boolean(as_d(0).scaled < as_d(1).scaled);
  if (n == "led") return boolean(as_d(0).scaled <= as_d(1).scaled);
  if (n == "gtd") return boolean(as_d(0).scaled > as_d(1).scaled);
  if (n == "ged") return boolean(as_d(0).scaled >= as_d(1).scaled);
  if (n == "eqd") return boolean(as_d(0).scaled == as_d(1).scaled);
  if (n == "and") return boolean(as_b(0) && as_b(1));
  if (n == "or") return boolean(as_b(0) || as_b(1));
  if (n == "not") return boolean(!as_b(0));
  if (n == "appt")
    return mk_value(TextV{expect<TextV>(args[0], "Text").s +
                          expect<TextV>(args[1], "Text").s});
  if (n == "eqt")
    return boolean(expect<TextV>(args[0], "Text").s ==
                   expect<TextV>(args[1], "Text").s);
  if (n == "eqp")
    return boolean(expect<PartyV>(args[0], "Party").party ==
                   expect<PartyV>(args[1], "Party").party);
  if (n == "eqdate")
    return boolean(expect<DateV>(args[0], "Date").days ==
                   expect<DateV>(args[1], "Date").days);
  if (n == "ltdate")
    return boolean(expect<DateV>(args[0], "Date").days <
                   expect<DateV>(args[1], "Date").days);
  if (n == "eqtime")
    return boolean(expect<TimestampV>(args[0], "Timestamp").micros ==
                   expect<TimestampV>(args[1], "Timestamp").micros);
  if (n == "lttime")
    return boolean(expect<TimestampV>(args[0], "Timestamp").micros <
                   expect<TimestampV>(args[1], "Timestamp").micros);
  if (n == "nil") return mk_value(ListV{});
  if (n == "cons") {
    ListV out;
    out.items.push_back(args[0]);
    const ListV& tail = expect<ListV>(args[1], "List");
    out.items.insert(out.items.end(), tail.items.begin(), tail.items.end());
    return mk_value(std::move(out));
  }
  if (n == "abort")
    fail(RuntimeErrorClass::Abort, expect<TextV>(args[0], "Text").s);
  wrong("unknown builtin '" + n + "'");
}

ValuePtr literal_value(const Literal& lit) {
  switch (lit.tag) {
    case Literal::Tag::Unit: return mk_value(UnitV{});
    case Literal::Tag::Bool: return mk_value(BoolV{lit.b});
    case Literal::Tag::Int64: return mk_value(Int64V{lit.i});
    case Literal::Tag::Decimal: return mk_value(DecimalV{lit.dec});
    case Literal::Tag::Text: return mk_value(TextV{lit.text});
    case Literal::Tag::Date: return mk_value(DateV{lit.i});
    case Literal::Tag::Timestamp: return mk_value(TimestampV{lit.i});
  }
  wrong("bad literal");
}

}  // namespace

ValuePtr Interpreter::eval(const Env& env, const ExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> ValuePtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EVar>) {
          const ValuePtr* v = env.lookup(n.name);
          if (!v) wrong("unbound variable '" + n.name + "'");
          return *v;
        } else if constexpr (std::is_same_v<T, ELam>) {
          return mk_value(ClosureV{env, n.var, n.body});
        } else if constexpr (std::is_same_v<T, EApp>) {
          ValuePtr f = eval(env, n.fun);
          ValuePtr a = eval(env, n.arg);
          const ClosureV& c = expect<ClosureV>(f, "function");
          return eval(c.env.extend(c.var, a), c.body);
        } else if constexpr (std::is_same_v<T, ETyLam>) {
          return mk_value(TyClosureV{env, n.body});
        } else if constexpr (std::is_same_v<T, ETyApp>) {
          ValuePtr f = eval(env, n.fun);
          const TyClosureV& c = expect<TyClosureV>(f, "type abstraction");
          return eval(c.env, c.body);  // types are erased at runtime
        } else if constexpr (std::is_same_v<T, ELit>) {
          return literal_value(n.lit);
        } else if constexpr (std::is_same_v<T, EParty>) {
          return mk_value(PartyV{n.party});
        } else if constexpr (std::is_same_v<T, EBuiltin>) {
          std::vector<ValuePtr> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(env, a));
          return eval_builtin(n, args);
        } else if constexpr (std::is_same_v<T, ERecCon>) {
          RecV rec;
          rec.ref = n.ref;
          for (const auto& [f, fe] : n.fields)
            rec.fields.emplace_back(f, eval(env, fe));
          return mk_value(std::move(rec));
        } else if constexpr (std::is_same_v<T, ERecProj>) {
          ValuePtr r = eval(env, n.arg);
          const RecV& rec = expect<RecV>(r, "record");
          const ValuePtr* f = rec.field(n.field);
          if (!f) wrong("no field '" + n.field + "'");
          return *f;
        } else if constexpr (std::is_same_v<T, ERecUpd>) {
          ValuePtr r = eval(env, n.record);
          ValuePtr v = eval(env, n.value);
          RecV rec = expect<RecV>(r, "record");
          for (auto& [f, fv] : rec.fields)
            if (f == n.field) {
              fv = v;
              return mk_value(std::move(rec));
            }
          wrong("no field '" + n.field + "'");
        } else if constexpr (std::is_same_v<T, EVarCon>) {
          return mk_value(VarV{n.ref, n.variant, eval(env, n.arg)});
        } else if constexpr (std::is_same_v<T, ECase>) {
          ValuePtr s = eval(env, n.scrutinee);
          for (const auto& alt : n.alts) {
            switch (alt.pat.tag) {
              case CasePattern::Tag::Default:
                return eval(env, alt.body);
              case CasePattern::Tag::BoolTrue:
                if (expect<BoolV>(s, "Bool").b) return eval(env, alt.body);
                break;
              case CasePattern::Tag::BoolFalse:
                if (!expect<BoolV>(s, "Bool").b) return eval(env, alt.body);
                break;
              case CasePattern::Tag::Nil:
                if (expect<ListV>(s, "List").items.empty())
                  return eval(env, alt.body);
                break;
              case CasePattern::Tag::Cons: {
                const ListV& l = expect<ListV>(s, "List");
                if (!l.items.empty()) {
                  ListV tail;
                  tail.items.assign(l.items.begin() + 1, l.items.end());
                  return eval(env.extend(alt.pat.bind1, l.items.front())
                                  .extend(alt.pat.bind2, mk_value(std::move(tail))),
                              alt.body);
                }
                break;
              }
              case CasePattern::Tag::Variant: {
                const VarV& v = expect<VarV>(s, "variant");
                if (v.ctor == alt.pat.variant)
                  return eval(env.extend(alt.pat.bind1, v.arg), alt.body);
                break;
              }
            }
          }
          wrong("no matching case alternative");
        } else if constexpr (std::is_same_v<T, EValRef>) {
          const ValueDef* v = store_.find_value(n.ref);
          if (!v) wrong("unknown value '" + n.ref.str() + "'");
          return eval(Env{}, v->body);  // re-entered on each reference
        } else if constexpr (std::is_same_v<T, EUpdatePure> ||
                             std::is_same_v<T, EUpdateBind> ||
                             std::is_same_v<T, EUpdateCreate> ||
                             std::is_same_v<T, EUpdateFetch> ||
                             std::is_same_v<T, EUpdateExercise>) {
          return mk_value(UpdateV{env, e});
        } else {  // ECidLeq
          const auto& c = std::get<ECidLeq>(e->node);
          std::int64_t l = expect<ContractIdV>(eval(env, c.lhs), "cid").id;
          std::int64_t r = expect<ContractIdV>(eval(env, c.rhs), "cid").id;
          return mk_value(BoolV{l <= r});
        }
      },
      e->node);
}

Interpreter::TemplateFacets Interpreter::template_facets(const QualName& tmpl,
                                                         const ValuePtr& arg) {
  const TemplateDef* t = store_.find_template(tmpl);
  if (!t) wrong("unknown template '" + tmpl.str() + "'");
  Env env = Env{}.extend(t->param_var, arg);
  TemplateFacets f;
  f.ensure_ok = expect<BoolV>(eval(env, t->ensure), "Bool").b;
  f.signatories = party_set(eval(env, t->signatories));
  f.observers = party_set(eval(env, t->observers));
  return f;
}

Interpreter::UpdateResult Interpreter::interpret(
    const ValuePtr& update, const std::set<std::string>& authorizers,
    LedgerState& state) {
  const UpdateV& u = expect<UpdateV>(update, "update");
  return std::visit(
      [&](const auto& n) -> UpdateResult {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EUpdatePure>) {
          return {eval(u.env, n.body), {}};
        } else if constexpr (std::is_same_v<T, EUpdateBind>) {
          UpdateResult r1 = interpret(eval(u.env, n.bound), authorizers, state);
          ValuePtr u2 = eval(u.env.extend(n.var, r1.value), n.body);
          UpdateResult r2 = interpret(u2, authorizers, state);
          Transaction tx = std::move(r1.tx);
          tx.insert(tx.end(), r2.tx.begin(), r2.tx.end());
          return {std::move(r2.value), std::move(tx)};
        } else if constexpr (std::is_same_v<T, EUpdateCreate>) {
          ValuePtr arg = eval(u.env, n.arg);
          TemplateFacets f = template_facets(n.template_ref, arg);
          if (!f.ensure_ok)
            fail(RuntimeErrorClass::EnsureFailed,
                 "ensure clause of " + n.template_ref.str() + " is false for " +
                     value_to_string(arg));
          if (f.signatories.empty())
            fail(RuntimeErrorClass::EmptySignatories,
                 "contract of " + n.template_ref.str() + " has no signatories");
          if (!is_subset(f.signatories, authorizers))
            fail(RuntimeErrorClass::AuthorizationError,
                 "create " + n.template_ref.str() + " requires signatories " +
                     party_set_string(f.signatories) + " but authorizers are " +
                     party_set_string(authorizers));
          std::int64_t cid = state.next_id++;
          state.contracts[cid] =
              ContractInfo{n.template_ref, arg, f.signatories, f.observers, true};
          Transaction tx{mk_action(
              CreateA{cid, n.template_ref, arg, f.signatories, f.observers})};
          return {mk_value(ContractIdV{cid}), std::move(tx)};
        } else if constexpr (std::is_same_v<T, EUpdateFetch>) {
          std::int64_t cid =
              expect<ContractIdV>(eval(u.env, n.cid), "cid").id;
          auto it = state.contracts.find(cid);
          if (it == state.contracts.end())
            fail(RuntimeErrorClass::ContractNotFound,
                 "no contract #" + std::to_string(cid));
          const ContractInfo& c = it->second;
          if (!c.active)
            fail(RuntimeErrorClass::ContractArchived,
                 "contract #" + std::to_string(cid) + " is archived");
          if (!(c.tmpl == n.template_ref))
            fail(RuntimeErrorClass::TemplateMismatch,
                 "contract #" + std::to_string(cid) + " is a " + c.tmpl.str() +
                     ", not a " + n.template_ref.str());
          std::set<std::string> stakeholders = c.signatories;
          stakeholders.insert(c.observers.begin(), c.observers.end());
          if (!intersects(authorizers, stakeholders))
            fail(RuntimeErrorClass::AuthorizationError,
                 "fetch of #" + std::to_string(cid) +
                     " requires a stakeholder among " +
                     party_set_string(stakeholders) + "; authorizers are " +
                     party_set_string(authorizers));
          Transaction tx{mk_action(
              FetchA{cid, c.tmpl, c.signatories, c.observers})};
          return {c.arg, std::move(tx)};
        } else {  // EUpdateExercise
          const auto& ex = std::get<EUpdateExercise>(u.expr->node);
          std::int64_t cid =
              expect<ContractIdV>(eval(u.env, ex.cid), "cid").id;
          ValuePtr charg = eval(u.env, ex.arg);
          auto it = state.contracts.find(cid);
          if (it == state.contracts.end())
            fail(RuntimeErrorClass::ContractNotFound,
                 "no contract #" + std::to_string(cid));
          if (!it->second.active)
            fail(RuntimeErrorClass::ContractArchived,
                 "contract #" + std::to_string(cid) + " is archived");
          if (!(it->second.tmpl == ex.template_ref))
            fail(RuntimeErrorClass::TemplateMismatch,
                 "contract #" + std::to_string(cid) + " is a " +
                     it->second.tmpl.str() + ", not a " +
                     ex.template_ref.str());
          const TemplateDef* t = store_.find_template(ex.template_ref);
          if (!t) wrong("unknown template '" + ex.template_ref.str() + "'");
          const ChoiceDef* ch = t->find_choice(ex.choice);
          if (!ch) wrong("unknown choice '" + ex.choice + "'");
          ContractInfo contract = it->second;  // copy: archive may invalidate
          Env cenv =
              Env{}.extend(t->param_var, contract.arg).extend(ch->arg_var, charg);
          std::set<std::string> controllers = party_set(eval(cenv, ch->controllers));
          std::set<std::string> choice_obs =
              party_set(eval(cenv, ch->choice_observers));
          if (!is_subset(controllers, authorizers))
            fail(RuntimeErrorClass::AuthorizationError,
                 "exercise of " + ex.choice + " on #" + std::to_string(cid) +
                     " requires controllers " + party_set_string(controllers) +
                     " but authorizers are " + party_set_string(authorizers));
          if (ch->kind == ChoiceKind::Consuming)
            state.contracts[cid].active = false;
          // consequences run with the contract's signatories + controllers,
          // not the original authorizers: delegation does not chain.
          std::set<std::string> inner = contract.signatories;
          inner.insert(controllers.begin(), controllers.end());
          ValuePtr body = eval(cenv, ch->body);
          UpdateResult r = interpret(body, inner, state);
          ExerciseA node{cid,
                         ex.template_ref,
                         ex.choice,
                         ch->kind,
                         charg,
                         controllers,
                         choice_obs,
                         contract.signatories,
                         contract.observers,
                         std::move(r.tx)};
          Transaction tx{mk_action(std::move(node))};
          return {std::move(r.value), std::move(tx)};
        }
      },
      u.expr->node);
}

// ---------------------------------------------------------------------------
// Transaction equality
// ---------------------------------------------------------------------------

bool action_equal(const ActionPtr& a, const ActionPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, CreateA>) {
          return x.cid == y.cid && x.tmpl == y.tmpl &&
                 value_equal(x.arg, y.arg) && x.signatories == y.signatories &&
                 x.observers == y.observers;
        } else if constexpr (std::is_same_v<T, ExerciseA>) {
          return x.cid == y.cid && x.tmpl == y.tmpl && x.choice == y.choice &&
                 x.kind == y.kind && value_equal(x.arg, y.arg) &&
                 x.controllers == y.controllers &&
                 x.choice_observers == y.choice_observers &&
                 x.signatories == y.signatories && x.observers == y.observers &&
                 transaction_equal(x.consequences, y.consequences);
        } else {
          return x.cid == y.cid && x.tmpl == y.tmpl &&
                 x.signatories == y.signatories && x.observers == y.observers;
        }
      },
      a->node);
}

bool transaction_equal(const Transaction& a, const Transaction& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!action_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace lf
