// Randomized generators and law checkers shared by the property suite and
// the acceptance runner. Checkers return human-readable descriptions of
// violations; an empty result means the law held on every generated case.
#pragma once

#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lf/ledger.hpp"
#include "lf/parser.hpp"
#include "lf/typecheck.hpp"

namespace lftest {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

// ---------------------------------------------------------------------------
// Serializability: random types and an independent reachability oracle
// ---------------------------------------------------------------------------

// Random ground-or-open types of bounded depth over tree.lf's datatypes.
inline lf::TypePtr random_type(Rng& rng, int depth) {
  using namespace lf;
  int roll = pick(rng, depth <= 0 ? 4 : 10);
  switch (roll) {
    case 0: return mk_tprim(PrimType::Int64);
    case 1: return mk_tprim(PrimType::Party);
    case 2: return mk_tprim(PrimType::Text);
    case 3: return pick(rng, 6) == 0 ? mk_tvar("a") : mk_tprim(PrimType::Bool);
    case 4: return mk_tapp(mk_tprim(PrimType::List), random_type(rng, depth - 1));
    case 5:
      return mk_tapp(mk_tprim(PrimType::ContractId), random_type(rng, depth - 1));
    case 6:
      return mk_tapp(mk_tprim(PrimType::Update), random_type(rng, depth - 1));
    case 7:
      return mk_arrow(random_type(rng, depth - 1), random_type(rng, depth - 1));
    case 8: {
      const char* names[] = {"Tree", "Node3", "SelfApp"};
      return mk_tapp(mk_tnamed(QualName{"Tree", names[pick(rng, 3)]}),
                     random_type(rng, depth - 1));
    }
    default:
      return mk_tforall("a", kind_star(), random_type(rng, depth - 1));
  }
}

// Independent oracle: breadth-first search over the expansion graph of the
// type. A type is serializable iff no reachable node is an arrow, forall,
// type variable, Update application, or under-applied constructor.
inline bool oracle_serializable(lf::Context& ctx, const lf::TypePtr& root) {
  using namespace lf;
  std::deque<TypePtr> queue{root};
  std::set<std::string> seen;
  while (!queue.empty()) {
    TypePtr t = queue.front();
    queue.pop_front();
    std::string key = type_to_string(t);
    if (!seen.insert(key).second) continue;
    // decompose the application spine
    std::vector<TypePtr> args;
    TypePtr head = t;
    while (auto* app = std::get_if<TApp>(&head->node)) {
      args.push_back(app->arg);
      head = app->fun;
    }
    std::reverse(args.begin(), args.end());
    if (std::holds_alternative<TVar>(head->node)) return false;
    if (std::holds_alternative<TForall>(head->node)) return false;
    if (std::holds_alternative<TFunArrow>(head->node)) return false;
    if (auto* p = std::get_if<TPrim>(&head->node)) {
      switch (p->prim) {
        case PrimType::List:
        case PrimType::ContractId:
          if (args.size() != 1) return false;
          queue.push_back(args[0]);
          break;
        case PrimType::Update:
          return false;
        default:
          if (!args.empty()) return false;
          break;
      }
      continue;
    }
    const auto& ref = std::get<TNamed>(head->node).ref;
    std::vector<TypeParam> const* params = nullptr;
    std::vector<std::pair<std::string, TypePtr>> const* members = nullptr;
    if (const RecordDef* r = ctx.find_record(ref)) {
      params = &r->params;
      members = &r->fields;
    } else if (const VariantDef* v = ctx.find_variant(ref)) {
      params = &v->params;
      members = &v->constructors;
    } else {
      return false;
    }
    if (params->size() != args.size()) return false;
    for (const auto& a : args) queue.push_back(a);
    for (const auto& [name, mt] : *members) {
      TypePtr inst = mt;
      for (size_t i = 0; i < params->size(); ++i)
        inst = substitute_type(inst, (*params)[i].var, args[i]);
      queue.push_back(inst);
    }
  }
  return true;
}

inline std::vector<std::string> check_serializability_oracle(
    const lf::PackageStore& store, Rng& rng, int n) {
  lf::Context ctx(store);
  std::vector<std::string> failures;
  for (int i = 0; i < n; ++i) {
    lf::TypePtr t = random_type(rng, 6);
    bool got = lf::is_serializable(ctx, t);
    bool want = oracle_serializable(ctx, t);
    if (got != want)
      failures.push_back("serializability mismatch on " + lf::type_to_string(t) +
                         ": predicate=" + (got ? "true" : "false") +
                         " oracle=" + (want ? "true" : "false"));
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Random canonical packages for the encode/decode identity
// ---------------------------------------------------------------------------

struct PkgGen {
  Rng& rng;
  // names are drawn from fixed safe pools, never colliding with keywords
  std::string field(int i) { return "f" + std::to_string(i); }
  std::string ctor(int i) { return "C" + std::to_string(i); }
  std::string tyname(int i) { return "T" + std::to_string(i); }
  std::string var(int i) { return "v" + std::to_string(i); }

  std::vector<std::string> types_in_scope;  // declared so far, for refs
  std::string module_name;

  lf::TypePtr gen_type(std::vector<std::string>& tyvars, int depth) {
    using namespace lf;
    int n = pick(rng, depth <= 0 ? 5 : 9);
    switch (n) {
      case 0: return mk_tprim(PrimType::Int64);
      case 1: return mk_tprim(PrimType::Bool);
      case 2: return mk_tprim(PrimType::Party);
      case 3:
        if (!tyvars.empty()) return mk_tvar(tyvars[pick(rng, (int)tyvars.size())]);
        return mk_tprim(PrimType::Text);
      case 4:
        if (!types_in_scope.empty())
          return mk_tnamed(QualName{
              module_name, types_in_scope[pick(rng, (int)types_in_scope.size())]});
        return mk_tprim(PrimType::Date);
      case 5:
        return mk_tapp(mk_tprim(PrimType::List), gen_type(tyvars, depth - 1));
      case 6:
        return mk_arrow(gen_type(tyvars, depth - 1), gen_type(tyvars, depth - 1));
      case 7: {
        tyvars.push_back("t" + std::to_string(tyvars.size()));
        TypePtr body = gen_type(tyvars, depth - 1);
        std::string v = tyvars.back();
        tyvars.pop_back();
        return mk_tforall(v, pick(rng, 4) ? kind_star()
                                          : kind_arrow(kind_star(), kind_star()),
                          body);
      }
      default:
        return mk_tapp(mk_tprim(PrimType::Update), gen_type(tyvars, depth - 1));
    }
  }

  lf::ExprPtr gen_expr(std::vector<std::string>& vars, int depth) {
    using namespace lf;
    int n = pick(rng, depth <= 0 ? 6 : 13);
    std::vector<std::string> tyvars;
    switch (n) {
      case 0: return mk_expr(ELit{Literal{Literal::Tag::Int64, false,
                                          pick(rng, 1000) - 500, {}, ""}});
      case 1: return mk_expr(ELit{Literal{Literal::Tag::Bool, pick(rng, 2) == 0,
                                          0, {}, ""}});
      case 2: {
        Literal l;
        l.tag = Literal::Tag::Text;
        const char* samples[] = {"", "x", "a b", "line\nbreak", "quote\"d",
                                 "back\\slash"};
        l.text = samples[pick(rng, 6)];
        return mk_expr(ELit{l});
      }
      case 3:
        if (!vars.empty())
          return mk_expr(EVar{vars[pick(rng, (int)vars.size())]});
        return mk_expr(ELit{Literal{Literal::Tag::Unit, false, 0, {}, ""}});
      case 4: return mk_expr(EParty{"P" + std::to_string(pick(rng, 4))});
      case 5: {
        Literal l;
        l.tag = Literal::Tag::Decimal;
        l.dec = DecimalLit{(__int128)(pick(rng, 20001) - 10000) *
                           (__int128)1000000000};  // multiples of 0.1
        return mk_expr(ELit{l});
      }
      case 6: {
        vars.push_back(var((int)vars.size()));
        ExprPtr body = gen_expr(vars, depth - 1);
        std::string v = vars.back();
        vars.pop_back();
        return mk_expr(ELam{v, gen_type(tyvars, 2), body});
      }
      case 7:
        return mk_expr(EApp{gen_expr(vars, depth - 1), gen_expr(vars, depth - 1)});
      case 8:
        return mk_expr(EBuiltin{"addi",
                                {},
                                {gen_expr(vars, depth - 1),
                                 gen_expr(vars, depth - 1)}});
      case 9:
        return mk_expr(EBuiltin{"cons",
                                {gen_type(tyvars, 2)},
                                {gen_expr(vars, depth - 1),
                                 gen_expr(vars, depth - 1)}});
      case 10: {
        ECase c;
        c.scrutinee = gen_expr(vars, depth - 1);
        CaseAlt alt1;
        alt1.pat.tag = CasePattern::Tag::Nil;
        alt1.body = gen_expr(vars, depth - 1);
        c.alts.push_back(alt1);
        CaseAlt alt2;
        alt2.pat.tag = CasePattern::Tag::Cons;
        alt2.pat.bind1 = "h";
        alt2.pat.bind2 = "t";
        vars.push_back("h");
        vars.push_back("t");
        alt2.body = gen_expr(vars, depth - 1);
        vars.pop_back();
        vars.pop_back();
        c.alts.push_back(alt2);
        return mk_expr(std::move(c));
      }
      case 11: {
        vars.push_back(var((int)vars.size()));
        ExprPtr body = gen_expr(vars, depth - 1);
        std::string v = vars.back();
        vars.pop_back();
        return mk_expr(EUpdateBind{v, gen_type(tyvars, 1),
                                   gen_expr(vars, depth - 1), body});
      }
      default:
        return mk_expr(EUpdatePure{gen_type(tyvars, 1), gen_expr(vars, depth - 1)});
    }
  }

  lf::Package gen_package() {
    using namespace lf;
    Package pkg;
    int nmods = 1 + pick(rng, 2);
    for (int mi = 0; mi < nmods; ++mi) {
      Module m;
      m.name = "M" + std::to_string(mi);
      module_name = m.name;
      types_in_scope.clear();
      int ntypes = pick(rng, 4);
      for (int ti = 0; ti < ntypes; ++ti) {
        std::vector<std::string> tyvars;
        std::vector<TypeParam> params;
        int nparams = pick(rng, 3);
        for (int p = 0; p < nparams; ++p) {
          params.push_back({"a" + std::to_string(p), kind_star()});
          tyvars.push_back(params.back().var);
        }
        if (pick(rng, 2) == 0) {
          RecordDef r;
          r.name = tyname(ti);
          r.params = params;
          int nf = pick(rng, 4);
          for (int f = 0; f < nf; ++f)
            r.fields.emplace_back(field(f), gen_type(tyvars, 3));
          m.records.push_back(std::move(r));
        } else {
          VariantDef v;
          v.name = tyname(ti);
          v.params = params;
          int nc = 1 + pick(rng, 3);
          for (int c = 0; c < nc; ++c)
            v.constructors.emplace_back(ctor(c), gen_type(tyvars, 3));
          m.variants.push_back(std::move(v));
        }
        types_in_scope.push_back(tyname(ti));
      }
      int nvals = pick(rng, 4);
      for (int vi = 0; vi < nvals; ++vi) {
        std::vector<std::string> tyvars, vars;
        m.values.push_back(ValueDef{"val" + std::to_string(vi),
                                    gen_type(tyvars, 3), gen_expr(vars, 3)});
      }
      pkg.modules.push_back(std::move(m));
    }
    canonicalize(pkg);
    return pkg;
  }
};

inline std::vector<std::string> check_roundtrip(Rng& rng, int n) {
  std::vector<std::string> failures;
  PkgGen gen{rng};
  for (int i = 0; i < n; ++i) {
    lf::Package pkg = gen.gen_package();
    std::string text = lf::pretty_package(pkg);
    try {
      lf::Package back = lf::parse_package(text, "gen");
      if (!lf::package_equal(pkg, back))
        failures.push_back("decode(encode(p)) != p for:\n" + text);
      else if (lf::pretty_package(back) != text)
        failures.push_back("encoding is not a fixed point for:\n" + text);
    } catch (const std::exception& e) {
      failures.push_back(std::string("decode failed: ") + e.what() + "\n" + text);
    }
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Random workflows over iou.lf: interpretation/validation/authorization laws
// ---------------------------------------------------------------------------

inline bool states_equal(const lf::LedgerState& a, const lf::LedgerState& b) {
  if (a.next_id != b.next_id) return false;
  if (a.contracts.size() != b.contracts.size()) return false;
  for (const auto& [cid, c] : a.contracts) {
    auto it = b.contracts.find(cid);
    if (it == b.contracts.end()) return false;
    const lf::ContractInfo& d = it->second;
    if (!(c.tmpl == d.tmpl) || c.active != d.active ||
        c.signatories != d.signatories || c.observers != d.observers ||
        !lf::value_equal(c.arg, d.arg))
      return false;
  }
  return true;
}

namespace detail {

struct ModelContract {
  std::string tmpl;  // "SimpleIou", "IouProposal", or "Iou"
  std::string issuer, owner;
};

inline lf::ExprPtr party_lit(const std::string& p) {
  return lf::mk_expr(lf::EParty{p});
}

inline lf::ExprPtr iou_arg(const std::string& record, const std::string& issuer,
                           const std::string& owner, int amount) {
  using namespace lf;
  Literal amt;
  amt.tag = Literal::Tag::Decimal;
  amt.dec = DecimalLit{(__int128)amount * 10000000000LL};
  Literal cur;
  cur.tag = Literal::Tag::Text;
  cur.text = "USD";
  ERecCon cash;
  cash.ref = QualName{"Iou", "Cash"};
  cash.fields = {{"currency", mk_expr(ELit{cur})}, {"amount", mk_expr(ELit{amt})}};
  ERecCon rec;
  rec.ref = QualName{"Iou", record};
  rec.fields = {{"issuer", party_lit(issuer)},
                {"owner", party_lit(owner)},
                {"cash", mk_expr(std::move(cash))}};
  return mk_expr(std::move(rec));
}

inline void count_writes(const lf::Transaction& tx,
                         std::map<std::int64_t, int>& writes) {
  using namespace lf;
  for (const ActionPtr& a : tx) {
    if (auto* c = std::get_if<CreateA>(&a->node)) {
      writes[c->cid]++;
    } else if (auto* e = std::get_if<ExerciseA>(&a->node)) {
      if (e->kind == ChoiceKind::Consuming) writes[e->cid]++;
      count_writes(e->consequences, writes);
    }
  }
}

inline lf::ExprPtr unit_lit() {
  return lf::mk_expr(
      lf::ELit{lf::Literal{lf::Literal::Tag::Unit, false, 0, {}, ""}});
}

}  // namespace detail

inline std::vector<std::string> check_workflow_laws(const lf::PackageStore& store,
                                                    Rng& rng, int sequences) {
  using namespace lf;
  using detail::ModelContract;
  std::vector<std::string> failures;
  auto fail = [&](int iter, const std::string& msg) {
    failures.push_back("sequence " + std::to_string(iter) + ": " + msg);
  };
  Interpreter interp(store);
  const std::vector<std::string> parties = {"Alice", "Bob", "Carol", "Dave",
                                            "Bank"};
  for (int iter = 0; iter < sequences; ++iter) {
    Ledger ledger(store);
    std::map<std::int64_t, ModelContract> model;  // active contracts
    std::map<std::int64_t, int> writes;
    int steps = 2 + pick(rng, 8);
    for (int s = 0; s < steps; ++s) {
      // choose a random applicable command
      ExprPtr update_expr;
      std::set<std::string> actors;
      std::int64_t exercise_cid = 0;
      int kind = pick(rng, 6);
      auto pick_party = [&] { return parties[pick(rng, (int)parties.size())]; };
      auto pick_contract = [&](const std::string& tmpl) -> std::int64_t {
        std::vector<std::int64_t> ids;
        for (const auto& [cid, mc] : model)
          if (mc.tmpl == tmpl) ids.push_back(cid);
        if (ids.empty()) return 0;
        return ids[pick(rng, (int)ids.size())];
      };
      if (kind <= 1) {  // create SimpleIou, sometimes without authorization
        std::string issuer = pick_party(), owner = pick_party();
        update_expr = mk_expr(EUpdateCreate{
            QualName{"Iou", "SimpleIou"},
            detail::iou_arg("SimpleIou", issuer, owner, 1 + pick(rng, 50))});
        bool authorized = pick(rng, 5) != 0;
        actors = {authorized ? issuer : (issuer == owner ? issuer + "x" : owner)};
        if (actors.count(issuer))
          model[ledger.state().next_id] = ModelContract{"SimpleIou", issuer, owner};
      } else if (kind == 2) {  // create IouProposal
        std::string issuer = pick_party(), owner = pick_party();
        update_expr = mk_expr(EUpdateCreate{
            QualName{"Iou", "IouProposal"},
            detail::iou_arg("IouProposal", issuer, owner, 1 + pick(rng, 50))});
        actors = {issuer};
        model[ledger.state().next_id] =
            ModelContract{"IouProposal", issuer, owner};
      } else if (kind == 3) {  // transfer a SimpleIou
        std::int64_t cid = pick_contract("SimpleIou");
        if (cid == 0) continue;
        const ModelContract mc = model[cid];
        std::string newOwner = pick_party();
        update_expr = mk_expr(EUpdateExercise{
            QualName{"Iou", "SimpleIou"}, "SimpleTransfer", mk_expr(EVar{"c"}),
            detail::party_lit(newOwner)});
        exercise_cid = cid;
        bool authorized = pick(rng, 4) != 0;
        std::string actor = authorized ? mc.owner : pick_party();
        actors = {actor};
        if (actor == mc.owner) {
          model[ledger.state().next_id] =
              ModelContract{"SimpleIou", mc.issuer, newOwner};
          model.erase(cid);
        }
      } else if (kind == 4) {  // accept a proposal
        std::int64_t cid = pick_contract("IouProposal");
        if (cid == 0) continue;
        const ModelContract mc = model[cid];
        update_expr = mk_expr(EUpdateExercise{QualName{"Iou", "IouProposal"},
                                              "Accept", mk_expr(EVar{"c"}),
                                              detail::unit_lit()});
        exercise_cid = cid;
        actors = {mc.owner};
        model[ledger.state().next_id] = ModelContract{"Iou", mc.issuer, mc.owner};
        model.erase(cid);
      } else {  // archive a SimpleIou (controllers = signatories = issuer)
        std::int64_t cid = pick_contract("SimpleIou");
        if (cid == 0) continue;
        const ModelContract mc = model[cid];
        update_expr = mk_expr(EUpdateExercise{QualName{"Iou", "SimpleIou"},
                                              "Archive", mk_expr(EVar{"c"}),
                                              detail::unit_lit()});
        exercise_cid = cid;
        actors = {mc.issuer};
        model.erase(cid);
      }

      Env env;
      if (exercise_cid != 0)
        env = env.extend("c", mk_value(ContractIdV{exercise_cid}));

      LedgerState pre = ledger.state();
      ValuePtr upd = interp.eval(env, update_expr);
      Ledger::SubmitResult r;
      try {
        r = ledger.submit(actors, upd);
      } catch (const RuntimeError&) {
        if (!states_equal(pre, ledger.state()))
          fail(iter, "a failed submit changed the ledger state");
        continue;
      }
      // law: recorded transactions validate against their pre-state
      try {
        validate_transaction(store, r.tx, pre);
      } catch (const RuntimeError& e) {
        fail(iter, std::string("accepted transaction failed validation: ") +
                       e.what());
      }
      // law: interpreter-accepted implies authorization-accepted
      try {
        check_authorization(actors, r.tx);
      } catch (const RuntimeError& e) {
        fail(iter, std::string("accepted transaction failed authorization: ") +
                       e.what());
      }
      detail::count_writes(r.tx, writes);
    }
    // law: every contract id is written at most twice (create + archive)
    for (const auto& [cid, n] : writes)
      if (n > 2)
        fail(iter, "contract #" + std::to_string(cid) + " written " +
                       std::to_string(n) + " times");
    // law: replaying the log from scratch reproduces the final state
    LedgerState replay;
    bool replay_ok = true;
    for (const Commit& c : ledger.log()) {
      try {
        replay = validate_transaction(store, c.tx, replay);
      } catch (const RuntimeError& e) {
        fail(iter, std::string("log replay failed: ") + e.what());
        replay_ok = false;
        break;
      }
    }
    if (replay_ok && !states_equal(replay, ledger.state()))
      fail(iter, "log replay does not reproduce the final state");
  }
  return failures;
}

// ---------------------------------------------------------------------------
// Random transactions for projection soundness and completeness
// ---------------------------------------------------------------------------

inline std::set<std::string> random_party_set(Rng& rng,
                                              const std::vector<std::string>& pool,
                                              int max_size, bool allow_empty) {
  std::set<std::string> out;
  int n = pick(rng, max_size + 1);
  if (!allow_empty && n == 0) n = 1;
  for (int i = 0; i < n; ++i) out.insert(pool[pick(rng, (int)pool.size())]);
  return out;
}

inline lf::ActionPtr random_action(Rng& rng,
                                   const std::vector<std::string>& pool,
                                   std::int64_t& next_cid, int depth) {
  using namespace lf;
  int kind = pick(rng, depth <= 0 ? 2 : 3);
  if (kind == 0) {
    CreateA c;
    c.cid = next_cid++;
    c.tmpl = QualName{"Gen", "T"};
    c.arg = mk_value(UnitV{});
    c.signatories = random_party_set(rng, pool, 2, false);
    c.observers = random_party_set(rng, pool, 2, true);
    return mk_action(std::move(c));
  }
  if (kind == 1) {
    FetchA f;
    f.cid = 1 + pick(rng, (int)next_cid);
    f.tmpl = QualName{"Gen", "T"};
    f.signatories = random_party_set(rng, pool, 2, false);
    f.observers = random_party_set(rng, pool, 2, true);
    return mk_action(std::move(f));
  }
  ExerciseA e;
  e.cid = 1 + pick(rng, (int)next_cid);
  e.tmpl = QualName{"Gen", "T"};
  e.choice = "Ch";
  e.kind = pick(rng, 2) ? ChoiceKind::Consuming : ChoiceKind::Nonconsuming;
  e.arg = mk_value(UnitV{});
  e.controllers = random_party_set(rng, pool, 2, false);
  e.choice_observers = random_party_set(rng, pool, 2, true);
  e.signatories = random_party_set(rng, pool, 2, false);
  e.observers = random_party_set(rng, pool, 2, true);
  int kids = pick(rng, 4);
  for (int i = 0; i < kids; ++i)
    e.consequences.push_back(random_action(rng, pool, next_cid, depth - 1));
  return mk_action(std::move(e));
}

inline void collect_pointers(const lf::Transaction& tx,
                             std::set<const lf::Action*>& out) {
  using namespace lf;
  for (const ActionPtr& a : tx) {
    out.insert(a.get());
    if (auto* e = std::get_if<ExerciseA>(&a->node))
      collect_pointers(e->consequences, out);
  }
}

inline std::vector<std::string> check_projection_laws(Rng& rng, int n) {
  using namespace lf;
  const std::vector<std::string> pool = {"A", "B", "C", "D"};
  std::vector<std::string> failures;
  for (int iter = 0; iter < n; ++iter) {
    std::int64_t next_cid = 1;
    Transaction tx;
    int roots = 1 + pick(rng, 3);
    for (int i = 0; i < roots; ++i)
      tx.push_back(random_action(rng, pool, next_cid, 3));
    std::set<const Action*> all;
    collect_pointers(tx, all);
    for (const std::string& party : pool) {
      Transaction proj = project_transaction(tx, party);
      // soundness: every projected root names the party as an informee, and
      // kept subtrees are shared verbatim with the original transaction
      std::set<const Action*> kept;
      collect_pointers(proj, kept);
      for (const ActionPtr& root : proj)
        if (!action_informees(root).count(party))
          failures.push_back("projection for " + party +
                             " kept a node the party need not see");
      for (const Action* p : kept)
        if (!all.count(p))
          failures.push_back("projection for " + party +
                             " contains a node not in the transaction");
      // completeness: every action the party must be informed of appears
      std::function<void(const ActionPtr&)> walk = [&](const ActionPtr& node) {
        if (action_informees(node).count(party) && !kept.count(node.get()))
          failures.push_back("projection for " + party + " misses a node");
        if (auto* e = std::get_if<ExerciseA>(&node->node))
          for (const ActionPtr& c : e->consequences) walk(c);
      };
      for (const ActionPtr& a : tx) walk(a);
    }
  }
  return failures;
}

}  // namespace lftest
