#include "lf/typecheck.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lf {

const char* type_error_class_name(TypeErrorClass c) {
  switch (c) {
    case TypeErrorClass::UnboundVar: return "UnboundVar";
    case TypeErrorClass::KindMismatch: return "KindMismatch";
    case TypeErrorClass::TypeMismatch: return "TypeMismatch";
    case TypeErrorClass::NotSaturated: return "NotSaturated";
    case TypeErrorClass::NotSerializable: return "NotSerializable";
    case TypeErrorClass::UnknownRef: return "UnknownRef";
    case TypeErrorClass::NonEmptySignatoryUnprovable:
      return "NonEmptySignatoryUnprovable";
    case TypeErrorClass::BadTemplate: return "BadTemplate";
    case TypeErrorClass::CyclicPackageDependency: return "CyclicPackageDependency";
  }
  return "?";
}

std::string TypeError::render() const {
  std::ostringstream os;
  os << span.file << ":" << span.start_line << ":" << span.start_col << ": "
     << type_error_class_name(cls) << ": " << what();
  return os.str();
}

void Context::push_kind(const std::string& var, KindPtr k) {
  kinds_.emplace_back(var, std::move(k));
}
void Context::pop_kind() { kinds_.pop_back(); }
const KindPtr* Context::lookup_kind(const std::string& var) const {
  for (auto it = kinds_.rbegin(); it != kinds_.rend(); ++it)
    if (it->first == var) return &it->second;
  return nullptr;
}

void Context::push_type(const std::string& var, TypePtr t) {
  types_.emplace_back(var, std::move(t));
}
void Context::pop_type() { types_.pop_back(); }
const TypePtr* Context::lookup_type(const std::string& var) const {
  for (auto it = types_.rbegin(); it != types_.rend(); ++it)
    if (it->first == var) return &it->second;
  return nullptr;
}

const Module* Context::find_module(const std::string& name) const {
  if (current_)
    if (const Module* m = current_->find_module(name)) return m;
  return store_.find_module(name);
}
const RecordDef* Context::find_record(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_record(q.name) : nullptr;
}
const VariantDef* Context::find_variant(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_variant(q.name) : nullptr;
}
const ValueDef* Context::find_value(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_value(q.name) : nullptr;
}
const TemplateDef* Context::find_template(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_template(q.name) : nullptr;
}

namespace {

[[noreturn]] void err(TypeErrorClass c, const Span& sp, const std::string& msg) {
  throw TypeError(c, sp, msg);
}

KindPtr named_kind(Context& ctx, const QualName& q, const Span& sp) {
  std::vector<TypeParam> const* params = nullptr;
  if (const RecordDef* r = ctx.find_record(q))
    params = &r->params;
  else if (const VariantDef* v = ctx.find_variant(q))
    params = &v->params;
  else
    err(TypeErrorClass::UnknownRef, sp, "unknown type '" + q.str() + "'");
  KindPtr k = kind_star();
  for (auto it = params->rbegin(); it != params->rend(); ++it)
    k = kind_arrow(it->kind, k);
  return k;
}

}  // namespace

KindPtr kind_of(Context& ctx, const TypePtr& t) {
  return std::visit(
      [&](const auto& n) -> KindPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TVar>) {
          const KindPtr* k = ctx.lookup_kind(n.name);
          if (!k)
            err(TypeErrorClass::UnboundVar, t->span,
                "unbound type variable '" + n.name + "'");
          return *k;
        } else if constexpr (std::is_same_v<T, TFunArrow>) {
          return kind_arrow(kind_star(), kind_arrow(kind_star(), kind_star()));
        } else if constexpr (std::is_same_v<T, TForall>) {
          ctx.push_kind(n.var, n.kind);
          KindPtr k = kind_of(ctx, n.body);
          ctx.pop_kind();
          if (!k->is_star())
            err(TypeErrorClass::KindMismatch, t->span,
                "forall body must have kind *, got " + kind_to_string(k));
          return kind_star();
        } else if constexpr (std::is_same_v<T, TApp>) {
          KindPtr kf = kind_of(ctx, n.fun);
          KindPtr ka = kind_of(ctx, n.arg);
          if (kf->is_star())
            err(TypeErrorClass::KindMismatch, t->span,
                "type of kind * applied to an argument");
          if (!kind_equal(kf->param, ka))
            err(TypeErrorClass::KindMismatch, t->span,
                "kind mismatch in type application: expected " +
                    kind_to_string(kf->param) + ", got " + kind_to_string(ka));
          return kf->result;
        } else if constexpr (std::is_same_v<T, TPrim>) {
          return prim_type_kind(n.prim);
        } else {
          return named_kind(ctx, n.ref, t->span);
        }
      },
      t->node);
}

namespace {

void expect_star(Context& ctx, const TypePtr& t) {
  KindPtr k = kind_of(ctx, t);
  if (!k->is_star())
    err(TypeErrorClass::KindMismatch, t->span,
        "expected a type of kind *, got " + kind_to_string(k));
}

void expect_type(const TypePtr& expected, const TypePtr& actual, const Span& sp,
                 const std::string& what) {
  if (!type_equal(expected, actual))
    err(TypeErrorClass::TypeMismatch, sp,
        what + ": expected " + type_to_string(expected) + ", got " +
            type_to_string(actual));
}

TypePtr list_of(TypePtr t) { return mk_tapp(mk_tprim(PrimType::List), std::move(t)); }
TypePtr update_of(TypePtr t) {
  return mk_tapp(mk_tprim(PrimType::Update), std::move(t));
}
TypePtr contract_id_of(TypePtr t) {
  return mk_tapp(mk_tprim(PrimType::ContractId), std::move(t));
}
TypePtr party_list() { return list_of(mk_tprim(PrimType::Party)); }

// Decomposes `t` into Named head + applied type arguments; fails unless the
// head is the expected Named ref with exactly `nparams` arguments.
std::vector<TypePtr> match_named_app(const TypePtr& t, const QualName& ref,
                                     size_t nparams, const Span& sp,
                                     const std::string& what) {
  std::vector<TypePtr> args;
  TypePtr head = t;
  while (auto* app = std::get_if<TApp>(&head->node)) {
    args.push_back(app->arg);
    head = app->fun;
  }
  std::reverse(args.begin(), args.end());
  auto* named = std::get_if<TNamed>(&head->node);
  if (!named || !(named->ref == ref) || args.size() != nparams)
    err(TypeErrorClass::TypeMismatch, sp,
        what + ": expected " + ref.str() + " value, got " + type_to_string(t));
  return args;
}

TypePtr instantiate(const std::vector<TypeParam>& params,
                    const std::vector<TypePtr>& args, TypePtr t) {
  for (size_t i = 0; i < params.size(); ++i)
    t = substitute_type(t, params[i].var, args[i]);
  return t;
}

void check_type_args(Context& ctx, const std::vector<TypeParam>& params,
                     const std::vector<TypePtr>& args, const Span& sp,
                     const std::string& what) {
  if (params.size() != args.size())
    err(TypeErrorClass::NotSaturated, sp,
        what + ": expected " + std::to_string(params.size()) +
            " type arguments, got " + std::to_string(args.size()));
  for (size_t i = 0; i < args.size(); ++i) {
    KindPtr k = kind_of(ctx, args[i]);
    if (!kind_equal(k, params[i].kind))
      err(TypeErrorClass::KindMismatch, sp,
          what + ": type argument " + std::to_string(i + 1) + " has kind " +
              kind_to_string(k) + ", expected " + kind_to_string(params[i].kind));
  }
}

TypePtr named_app(const QualName& ref, const std::vector<TypePtr>& args) {
  TypePtr t = mk_tnamed(ref);
  for (const auto& a : args) t = mk_tapp(t, a);
  return t;
}

TypePtr builtin_type(Context& ctx, const EBuiltin& b, const Span& sp) {
  auto fixed = [&](std::vector<TypePtr> argtys, TypePtr result) -> TypePtr {
    if (b.args.size() != argtys.size())
      err(TypeErrorClass::NotSaturated, sp, "builtin '" + b.name + "' arity");
    for (size_t i = 0; i < argtys.size(); ++i)
      expect_type(argtys[i], type_of(ctx, b.args[i]), b.args[i]->span,
                  "argument of '" + b.name + "'");
    return result;
  };
  auto i64 = [] { return mk_tprim(PrimType::Int64); };
  auto dec = [] { return mk_tprim(PrimType::Decimal); };
  auto boolean = [] { return mk_tprim(PrimType::Bool); };
  auto text = [] { return mk_tprim(PrimType::Text); };

  const std::string& n = b.name;
  if (n == "addi" || n == "subi" || n == "muli" || n == "divi" || n == "modi")
    return fixed({i64(), i64()}, i64());
  if (n == "lti" || n == "lei" || n == "gti" || n == "gei" || n == "eqi")
    return fixed({i64(), i64()}, boolean());
  if (n == "addd" || n == "subd" || n == "muld" || n == "divd")
    return fixed({dec(), dec()}, dec());
  if (n == "ltd" || n == "led" || n == "gtd" || n == "ged" || n == "eqd")
    return fixed({dec(), dec()}, boolean());
  if (n == "and" || n == "or") return fixed({boolean(), boolean()}, boolean());
  if (n == "not") return fixed({boolean()}, boolean());
  if (n == "appt") return fixed({text(), text()}, text());
  if (n == "eqt") return fixed({text(), text()}, boolean());
  if (n == "eqp")
    return fixed({mk_tprim(PrimType::Party), mk_tprim(PrimType::Party)}, boolean());
  if (n == "eqdate" || n == "ltdate")
    return fixed({mk_tprim(PrimType::Date), mk_tprim(PrimType::Date)}, boolean());
  if (n == "eqtime" || n == "lttime")
    return fixed({mk_tprim(PrimType::Timestamp), mk_tprim(PrimType::Timestamp)},
                 boolean());
  if (n == "nil" || n == "cons" || n == "abort") {
    if (b.type_args.size() != 1)
      err(TypeErrorClass::NotSaturated, sp, "builtin '" + n + "' type arity");
    const TypePtr& ty = b.type_args[0];
    expect_star(ctx, ty);
    if (n == "nil") return fixed({}, list_of(ty));
    if (n == "cons") return fixed({ty, list_of(ty)}, list_of(ty));
    return fixed({text()}, ty);  // abort
  }
  err(TypeErrorClass::UnknownRef, sp, "unknown builtin '" + n + "'");
}

}  // namespace

TypePtr type_of(Context& ctx, const ExprPtr& e) {
  return std::visit(
      [&](const auto& n) -> TypePtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EVar>) {
          const TypePtr* t = ctx.lookup_type(n.name);
          if (!t)
            err(TypeErrorClass::UnboundVar, e->span,
                "unbound variable '" + n.name + "'");
          return *t;
        } else if constexpr (std::is_same_v<T, ELam>) {
          expect_star(ctx, n.annot);
          ctx.push_type(n.var, n.annot);
          TypePtr body = type_of(ctx, n.body);
          ctx.pop_type();
          return mk_arrow(n.annot, body);
        } else if constexpr (std::is_same_v<T, EApp>) {
          TypePtr ft = type_of(ctx, n.fun);
          auto arrow = as_arrow(ft);
          if (!arrow)
            err(TypeErrorClass::TypeMismatch, e->span,
                "applied expression has non-function type " + type_to_string(ft));
          expect_type(arrow->first, type_of(ctx, n.arg), n.arg->span,
                      "function argument");
          return arrow->second;
        } else if constexpr (std::is_same_v<T, ETyLam>) {
          ctx.push_kind(n.var, n.kind);
          TypePtr body = type_of(ctx, n.body);
          ctx.pop_kind();
          return mk_tforall(n.var, n.kind, body);
        } else if constexpr (std::is_same_v<T, ETyApp>) {
          TypePtr ft = type_of(ctx, n.fun);
          auto* forall = std::get_if<TForall>(&ft->node);
          if (!forall)
            err(TypeErrorClass::TypeMismatch, e->span,
                "type application of non-polymorphic expression of type " +
                    type_to_string(ft));
          KindPtr ka = kind_of(ctx, n.arg);
          if (!kind_equal(ka, forall->kind))
            err(TypeErrorClass::KindMismatch, e->span,
                "type argument has kind " + kind_to_string(ka) + ", expected " +
                    kind_to_string(forall->kind));
          return substitute_type(forall->body, forall->var, n.arg);
        } else if constexpr (std::is_same_v<T, ELit>) {
          switch (n.lit.tag) {
            case Literal::Tag::Unit: return mk_tprim(PrimType::Unit);
            case Literal::Tag::Bool: return mk_tprim(PrimType::Bool);
            case Literal::Tag::Int64: return mk_tprim(PrimType::Int64);
            case Literal::Tag::Decimal: return mk_tprim(PrimType::Decimal);
            case Literal::Tag::Text: return mk_tprim(PrimType::Text);
            case Literal::Tag::Date: return mk_tprim(PrimType::Date);
            case Literal::Tag::Timestamp: return mk_tprim(PrimType::Timestamp);
          }
          err(TypeErrorClass::TypeMismatch, e->span, "bad literal");
        } else if constexpr (std::is_same_v<T, EParty>) {
          return mk_tprim(PrimType::Party);
        } else if constexpr (std::is_same_v<T, EBuiltin>) {
          return builtin_type(ctx, n, e->span);
        } else if constexpr (std::is_same_v<T, ERecCon>) {
          const RecordDef* r = ctx.find_record(n.ref);
          if (!r)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown record '" + n.ref.str() + "'");
          check_type_args(ctx, r->params, n.type_args, e->span, n.ref.str());
          if (n.fields.size() != r->fields.size())
            err(TypeErrorClass::NotSaturated, e->span,
                "record constructor " + n.ref.str() + " needs all " +
                    std::to_string(r->fields.size()) + " fields");
          for (size_t i = 0; i < r->fields.size(); ++i) {
            if (n.fields[i].first != r->fields[i].first)
              err(TypeErrorClass::TypeMismatch, e->span,
                  "record field " + std::to_string(i + 1) + " must be '" +
                      r->fields[i].first + "', got '" + n.fields[i].first + "'");
            expect_type(instantiate(r->params, n.type_args, r->fields[i].second),
                        type_of(ctx, n.fields[i].second), n.fields[i].second->span,
                        "field '" + n.fields[i].first + "'");
          }
          return named_app(n.ref, n.type_args);
        } else if constexpr (std::is_same_v<T, ERecProj>) {
          const RecordDef* r = ctx.find_record(n.ref);
          if (!r)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown record '" + n.ref.str() + "'");
          TypePtr at = type_of(ctx, n.arg);
          auto args = match_named_app(at, n.ref, r->params.size(), e->span,
                                      "projection from " + n.ref.str());
          for (const auto& [f, ft] : r->fields)
            if (f == n.field) return instantiate(r->params, args, ft);
          err(TypeErrorClass::UnknownRef, e->span,
              "record " + n.ref.str() + " has no field '" + n.field + "'");
        } else if constexpr (std::is_same_v<T, ERecUpd>) {
          const RecordDef* r = ctx.find_record(n.ref);
          if (!r)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown record '" + n.ref.str() + "'");
          TypePtr rt = type_of(ctx, n.record);
          auto args = match_named_app(rt, n.ref, r->params.size(), e->span,
                                      "update of " + n.ref.str());
          for (const auto& [f, ft] : r->fields)
            if (f == n.field) {
              expect_type(instantiate(r->params, args, ft), type_of(ctx, n.value),
                          n.value->span, "updated field '" + n.field + "'");
              return rt;
            }
          err(TypeErrorClass::UnknownRef, e->span,
              "record " + n.ref.str() + " has no field '" + n.field + "'");
        } else if constexpr (std::is_same_v<T, EVarCon>) {
          const VariantDef* v = ctx.find_variant(n.ref);
          if (!v)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown variant '" + n.ref.str() + "'");
          check_type_args(ctx, v->params, n.type_args, e->span, n.ref.str());
          for (const auto& [c, ct] : v->constructors)
            if (c == n.variant) {
              expect_type(instantiate(v->params, n.type_args, ct),
                          type_of(ctx, n.arg), n.arg->span,
                          "argument of constructor '" + c + "'");
              return named_app(n.ref, n.type_args);
            }
          err(TypeErrorClass::UnknownRef, e->span,
              "variant " + n.ref.str() + " has no constructor '" + n.variant + "'");
        } else if constexpr (std::is_same_v<T, ECase>) {
          TypePtr st = type_of(ctx, n.scrutinee);
          if (n.alts.empty())
            err(TypeErrorClass::TypeMismatch, e->span, "case with no alternatives");
          // what may be matched is fixed by the scrutinee type
          const VariantDef* variant = nullptr;
          std::vector<TypePtr> vargs;
          bool is_bool = false;
          TypePtr elem;  // list element type
          if (auto pa = as_prim_app(st); pa && pa->first == PrimType::List) {
            elem = pa->second;
          } else if (auto* p = std::get_if<TPrim>(&st->node);
                     p && p->prim == PrimType::Bool) {
            is_bool = true;
          } else {
            TypePtr head = st;
            std::vector<TypePtr> args;
            while (auto* app = std::get_if<TApp>(&head->node)) {
              args.push_back(app->arg);
              head = app->fun;
            }
            std::reverse(args.begin(), args.end());
            if (auto* named = std::get_if<TNamed>(&head->node)) {
              variant = ctx.find_variant(named->ref);
              vargs = std::move(args);
            }
            if (!variant)
              err(TypeErrorClass::TypeMismatch, n.scrutinee->span,
                  "cannot case on a value of type " + type_to_string(st));
          }
          TypePtr result;
          for (const auto& alt : n.alts) {
            TypePtr bt;
            switch (alt.pat.tag) {
              case CasePattern::Tag::Default:
                bt = type_of(ctx, alt.body);
                break;
              case CasePattern::Tag::BoolTrue:
              case CasePattern::Tag::BoolFalse:
                if (!is_bool)
                  err(TypeErrorClass::TypeMismatch, alt.body->span,
                      "boolean pattern on non-Bool scrutinee");
                bt = type_of(ctx, alt.body);
                break;
              case CasePattern::Tag::Nil:
                if (!elem)
                  err(TypeErrorClass::TypeMismatch, alt.body->span,
                      "list pattern on non-List scrutinee");
                bt = type_of(ctx, alt.body);
                break;
              case CasePattern::Tag::Cons: {
                if (!elem)
                  err(TypeErrorClass::TypeMismatch, alt.body->span,
                      "list pattern on non-List scrutinee");
                ctx.push_type(alt.pat.bind1, elem);
                ctx.push_type(alt.pat.bind2, list_of(elem));
                bt = type_of(ctx, alt.body);
                ctx.pop_type();
                ctx.pop_type();
                break;
              }
              case CasePattern::Tag::Variant: {
                if (!variant)
                  err(TypeErrorClass::TypeMismatch, alt.body->span,
                      "variant pattern on non-variant scrutinee");
                TypePtr ct;
                for (const auto& [c, t] : variant->constructors)
                  if (c == alt.pat.variant) ct = t;
                if (!ct)
                  err(TypeErrorClass::UnknownRef, alt.body->span,
                      "variant has no constructor '" + alt.pat.variant + "'");
                ctx.push_type(alt.pat.bind1, instantiate(variant->params, vargs, ct));
                bt = type_of(ctx, alt.body);
                ctx.pop_type();
                break;
              }
            }
            if (!result)
              result = bt;
            else
              expect_type(result, bt, alt.body->span, "case alternative");
          }
          return result;
        } else if constexpr (std::is_same_v<T, EValRef>) {
          const ValueDef* v = ctx.find_value(n.ref);
          if (!v)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown value '" + n.ref.str() + "'");
          return v->type;
        } else if constexpr (std::is_same_v<T, EUpdatePure>) {
          expect_star(ctx, n.type);
          expect_type(n.type, type_of(ctx, n.body), n.body->span, "pure");
          return update_of(n.type);
        } else if constexpr (std::is_same_v<T, EUpdateBind>) {
          expect_star(ctx, n.type);
          expect_type(update_of(n.type), type_of(ctx, n.bound), n.bound->span,
                      "bind");
          ctx.push_type(n.var, n.type);
          TypePtr bt = type_of(ctx, n.body);
          ctx.pop_type();
          auto pa = as_prim_app(bt);
          if (!pa || pa->first != PrimType::Update)
            err(TypeErrorClass::TypeMismatch, n.body->span,
                "bind body must be an Update, got " + type_to_string(bt));
          return bt;
        } else if constexpr (std::is_same_v<T, EUpdateCreate>) {
          const TemplateDef* t = ctx.find_template(n.template_ref);
          if (!t)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown template '" + n.template_ref.str() + "'");
          expect_type(mk_tnamed(n.template_ref), type_of(ctx, n.arg), n.arg->span,
                      "create argument");
          return update_of(contract_id_of(mk_tnamed(n.template_ref)));
        } else if constexpr (std::is_same_v<T, EUpdateFetch>) {
          if (!ctx.find_template(n.template_ref))
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown template '" + n.template_ref.str() + "'");
          expect_type(contract_id_of(mk_tnamed(n.template_ref)),
                      type_of(ctx, n.cid), n.cid->span, "fetch argument");
          return update_of(mk_tnamed(n.template_ref));
        } else if constexpr (std::is_same_v<T, EUpdateExercise>) {
          const TemplateDef* t = ctx.find_template(n.template_ref);
          if (!t)
            err(TypeErrorClass::UnknownRef, e->span,
                "unknown template '" + n.template_ref.str() + "'");
          const ChoiceDef* c = t->find_choice(n.choice);
          if (!c)
            err(TypeErrorClass::UnknownRef, e->span,
                "template " + n.template_ref.str() + " has no choice '" +
                    n.choice + "'");
          expect_type(contract_id_of(mk_tnamed(n.template_ref)),
                      type_of(ctx, n.cid), n.cid->span, "exercise contract id");
          expect_type(c->arg_type, type_of(ctx, n.arg), n.arg->span,
                      "choice argument");
          return update_of(c->result_type);
        } else {  // ECidLeq
          const auto& c = std::get<ECidLeq>(e->node);
          if (!ctx.find_template(std::get_if<TNamed>(&c.type_arg->node)
                                     ? std::get<TNamed>(c.type_arg->node).ref
                                     : QualName{}))
            err(TypeErrorClass::UnknownRef, e->span,
                "cid_le expects a template type argument");
          expect_type(contract_id_of(c.type_arg), type_of(ctx, c.lhs),
                      c.lhs->span, "cid_le");
          expect_type(contract_id_of(c.type_arg), type_of(ctx, c.rhs),
                      c.rhs->span, "cid_le");
          return mk_tprim(PrimType::Bool);
        }
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Serializability
// ---------------------------------------------------------------------------

namespace {

bool serializable_rec(Context& ctx, const TypePtr& t,
                      std::set<std::string>& in_progress) {
  if (std::holds_alternative<TVar>(t->node)) return false;
  if (std::holds_alternative<TFunArrow>(t->node)) return false;
  if (std::holds_alternative<TForall>(t->node)) return false;
  if (auto* p = std::get_if<TPrim>(&t->node)) {
    switch (p->prim) {
      case PrimType::Unit: case PrimType::Bool: case PrimType::Int64:
      case PrimType::Decimal: case PrimType::Text: case PrimType::Date:
      case PrimType::Timestamp: case PrimType::Party:
        return true;
      default:
        return false;  // unapplied List/ContractId/Update
    }
  }
  if (as_arrow(t)) return false;
  if (auto pa = as_prim_app(t)) {
    if (pa->first == PrimType::List || pa->first == PrimType::ContractId)
      return serializable_rec(ctx, pa->second, in_progress);
    return false;  // Update
  }
  // Named application
  TypePtr head = t;
  std::vector<TypePtr> args;
  while (auto* app = std::get_if<TApp>(&head->node)) {
    args.push_back(app->arg);
    head = app->fun;
  }
  std::reverse(args.begin(), args.end());
  auto* named = std::get_if<TNamed>(&head->node);
  if (!named) return false;
  for (const auto& a : args)
    if (!serializable_rec(ctx, a, in_progress)) return false;
  std::string key = type_to_string(t);
  if (in_progress.count(key)) return true;  // coinductive: assume while unrolling
  in_progress.insert(key);
  bool ok = true;
  if (const RecordDef* r = ctx.find_record(named->ref)) {
    if (r->params.size() != args.size()) ok = false;
    for (const auto& [f, ft] : r->fields) {
      if (!ok) break;
      ok = serializable_rec(ctx, instantiate(r->params, args, ft), in_progress);
    }
  } else if (const VariantDef* v = ctx.find_variant(named->ref)) {
    if (v->params.size() != args.size()) ok = false;
    for (const auto& [c, ct] : v->constructors) {
      if (!ok) break;
      ok = serializable_rec(ctx, instantiate(v->params, args, ct), in_progress);
    }
  } else {
    ok = false;
  }
  in_progress.erase(key);
  return ok;
}

}  // namespace

bool is_serializable(Context& ctx, const TypePtr& t) {
  std::set<std::string> in_progress;
  return serializable_rec(ctx, t, in_progress);
}

// ---------------------------------------------------------------------------
// Template and package well-formedness
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_template(const TemplateDef& t, const std::string& msg) {
  err(TypeErrorClass::BadTemplate, Span{}, "template " + t.name + ": " + msg);
}

bool is_empty_party_nil(const ExprPtr& e) {
  auto* b = std::get_if<EBuiltin>(&e->node);
  return b && b->name == "nil" && b->args.empty();
}

}  // namespace

void check_template(Context& ctx, const Module& mod, const TemplateDef& t) {
  QualName self{mod.name, t.name};
  const RecordDef* rec = ctx.find_record(self);
  if (!rec) bad_template(t, "no contract-argument record of the same name");
  if (!rec->params.empty())
    bad_template(t, "contract-argument record must be monomorphic");
  TypePtr self_ty = mk_tnamed(self);
  if (!is_serializable(ctx, self_ty))
    err(TypeErrorClass::NotSerializable, Span{},
        "template " + t.name + ": contract argument type is not serializable");
  if (is_empty_party_nil(t.signatories))
    err(TypeErrorClass::NonEmptySignatoryUnprovable, t.signatories->span,
        "template " + t.name + ": signatories are the empty list literal");

  ctx.push_type(t.param_var, self_ty);
  expect_type(mk_tprim(PrimType::Bool), type_of(ctx, t.ensure), t.ensure->span,
              "ensure clause");
  expect_type(party_list(), type_of(ctx, t.signatories), t.signatories->span,
              "signatory clause");
  expect_type(party_list(), type_of(ctx, t.observers), t.observers->span,
              "observer clause");
  ctx.pop_type();

  bool have_archive = false;
  for (const ChoiceDef& c : t.choices) {
    if (c.name == kArchiveChoiceName) have_archive = true;
    if (!is_serializable(ctx, c.arg_type))
      err(TypeErrorClass::NotSerializable, c.arg_type->span,
          "template " + t.name + ", choice " + c.name +
              ": argument type is not serializable");
    if (!is_serializable(ctx, c.result_type))
      err(TypeErrorClass::NotSerializable, c.result_type->span,
          "template " + t.name + ", choice " + c.name +
              ": result type is not serializable");
    ctx.push_type(t.param_var, self_ty);
    ctx.push_type(c.arg_var, c.arg_type);
    expect_type(party_list(), type_of(ctx, c.controllers), c.controllers->span,
                "controllers clause");
    expect_type(party_list(), type_of(ctx, c.choice_observers),
                c.choice_observers->span, "choice-observers clause");
    expect_type(update_of(c.result_type), type_of(ctx, c.body), c.body->span,
                "choice body");
    ctx.pop_type();
    ctx.pop_type();
  }
  if (!have_archive) bad_template(t, "missing Archive choice");
}

void check_package(const PackageStore& store, const Package& pkg) {
  Context ctx(store, &pkg);
  for (const Module& mod : pkg.modules) {
    // datatype declarations: field/constructor types well-kinded at *
    for (const RecordDef& r : mod.records) {
      for (const auto& p : r.params) ctx.push_kind(p.var, p.kind);
      for (const auto& [f, ft] : r.fields) expect_star(ctx, ft);
      for (size_t i = 0; i < r.params.size(); ++i) ctx.pop_kind();
    }
    for (const VariantDef& v : mod.variants) {
      for (const auto& p : v.params) ctx.push_kind(p.var, p.kind);
      for (const auto& [c, ct] : v.constructors) expect_star(ctx, ct);
      for (size_t i = 0; i < v.params.size(); ++i) ctx.pop_kind();
    }
    // values: signatures first (mutual recursion), then bodies
    for (const ValueDef& v : mod.values) expect_star(ctx, v.type);
    for (const ValueDef& v : mod.values)
      expect_type(v.type, type_of(ctx, v.body), v.body->span,
                  "value definition '" + v.name + "'");
    for (const TemplateDef& t : mod.templates) check_template(ctx, mod, t);
  }
}

// ---------------------------------------------------------------------------
// Load ordering
// ---------------------------------------------------------------------------

namespace {

void collect_type_modules(const TypePtr& t, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TForall>) {
          collect_type_modules(n.body, out);
        } else if constexpr (std::is_same_v<T, TApp>) {
          collect_type_modules(n.fun, out);
          collect_type_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, TNamed>) {
          out.insert(n.ref.module);
        }
      },
      t->node);
}

void collect_expr_modules(const ExprPtr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ELam>) {
          collect_type_modules(n.annot, out);
          collect_expr_modules(n.body, out);
        } else if constexpr (std::is_same_v<T, EApp>) {
          collect_expr_modules(n.fun, out);
          collect_expr_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, ETyLam>) {
          collect_expr_modules(n.body, out);
        } else if constexpr (std::is_same_v<T, ETyApp>) {
          collect_expr_modules(n.fun, out);
          collect_type_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, EBuiltin>) {
          for (const auto& t : n.type_args) collect_type_modules(t, out);
          for (const auto& a : n.args) collect_expr_modules(a, out);
        } else if constexpr (std::is_same_v<T, ERecCon>) {
          out.insert(n.ref.module);
          for (const auto& t : n.type_args) collect_type_modules(t, out);
          for (const auto& [f, v] : n.fields) collect_expr_modules(v, out);
        } else if constexpr (std::is_same_v<T, ERecProj>) {
          out.insert(n.ref.module);
          collect_expr_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, ERecUpd>) {
          out.insert(n.ref.module);
          collect_expr_modules(n.record, out);
          collect_expr_modules(n.value, out);
        } else if constexpr (std::is_same_v<T, EVarCon>) {
          out.insert(n.ref.module);
          for (const auto& t : n.type_args) collect_type_modules(t, out);
          collect_expr_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, ECase>) {
          collect_expr_modules(n.scrutinee, out);
          for (const auto& alt : n.alts) collect_expr_modules(alt.body, out);
        } else if constexpr (std::is_same_v<T, EValRef>) {
          out.insert(n.ref.module);
        } else if constexpr (std::is_same_v<T, EUpdatePure>) {
          collect_type_modules(n.type, out);
          collect_expr_modules(n.body, out);
        } else if constexpr (std::is_same_v<T, EUpdateBind>) {
          collect_type_modules(n.type, out);
          collect_expr_modules(n.bound, out);
          collect_expr_modules(n.body, out);
        } else if constexpr (std::is_same_v<T, EUpdateCreate>) {
          out.insert(n.template_ref.module);
          collect_expr_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, EUpdateFetch>) {
          out.insert(n.template_ref.module);
          collect_expr_modules(n.cid, out);
        } else if constexpr (std::is_same_v<T, EUpdateExercise>) {
          out.insert(n.template_ref.module);
          collect_expr_modules(n.cid, out);
          collect_expr_modules(n.arg, out);
        } else if constexpr (std::is_same_v<T, ECidLeq>) {
          collect_type_modules(n.type_arg, out);
          collect_expr_modules(n.lhs, out);
          collect_expr_modules(n.rhs, out);
        }
      },
      e->node);
}

std::set<std::string> package_module_deps(const Package& pkg) {
  std::set<std::string> refs;
  for (const Module& m : pkg.modules) {
    for (const RecordDef& r : m.records)
      for (const auto& [f, t] : r.fields) collect_type_modules(t, refs);
    for (const VariantDef& v : m.variants)
      for (const auto& [c, t] : v.constructors) collect_type_modules(t, refs);
    for (const ValueDef& v : m.values) {
      collect_type_modules(v.type, refs);
      collect_expr_modules(v.body, refs);
    }
    for (const TemplateDef& t : m.templates) {
      collect_expr_modules(t.ensure, refs);
      collect_expr_modules(t.signatories, refs);
      collect_expr_modules(t.observers, refs);
      for (const ChoiceDef& c : t.choices) {
        collect_type_modules(c.arg_type, refs);
        collect_type_modules(c.result_type, refs);
        collect_expr_modules(c.controllers, refs);
        collect_expr_modules(c.choice_observers, refs);
        collect_expr_modules(c.body, refs);
      }
    }
  }
  for (const Module& m : pkg.modules) refs.erase(m.name);
  return refs;
}

}  // namespace

void load_packages(PackageStore& store, std::vector<Package> pkgs) {
  // topological order over module references between the new packages
  size_t n = pkgs.size();
  std::vector<std::set<std::string>> deps(n);
  std::map<std::string, size_t> owner;
  for (size_t i = 0; i < n; ++i) {
    deps[i] = package_module_deps(pkgs[i]);
    for (const Module& m : pkgs[i].modules) {
      if (owner.count(m.name) || store.find_module(m.name))
        err(TypeErrorClass::UnknownRef, Span{},
            "module '" + m.name + "' defined more than once");
      owner[m.name] = i;
    }
  }
  std::vector<int> state(n, 0);  // 0 unvisited, 1 visiting, 2 done
  std::vector<size_t> order;
  auto visit = [&](auto&& self, size_t i) -> void {
    if (state[i] == 2) return;
    if (state[i] == 1)
      err(TypeErrorClass::CyclicPackageDependency, Span{},
          "cyclic dependency between packages");
    state[i] = 1;
    for (const auto& mod : deps[i]) {
      auto it = owner.find(mod);
      if (it != owner.end() && it->second != i) self(self, it->second);
    }
    state[i] = 2;
    order.push_back(i);
  };
  for (size_t i = 0; i < n; ++i) visit(visit, i);
  for (size_t i : order) {
    check_package(store, pkgs[i]);
    store.add(std::move(pkgs[i]));
  }
}

}  // namespace lf
