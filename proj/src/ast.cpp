#include "lf/ast.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace lf {

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

KindPtr kind_star() {
  static const KindPtr star = std::make_shared<Kind>();
  return star;
}

KindPtr kind_arrow(KindPtr param, KindPtr result) {
  auto k = std::make_shared<Kind>();
  k->param = std::move(param);
  k->result = std::move(result);
  return k;
}

bool kind_equal(const KindPtr& a, const KindPtr& b) {
  if (a->is_star() || b->is_star()) return a->is_star() && b->is_star();
  return kind_equal(a->param, b->param) && kind_equal(a->result, b->result);
}

std::string kind_to_string(const KindPtr& k) {
  if (k->is_star()) return "*";
  return "(-> " + kind_to_string(k->param) + " " + kind_to_string(k->result) + ")";
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

const char* prim_type_name(PrimType p) {
  switch (p) {
    case PrimType::Unit: return "Unit";
    case PrimType::Bool: return "Bool";
    case PrimType::Int64: return "Int64";
    case PrimType::Decimal: return "Decimal";
    case PrimType::Text: return "Text";
    case PrimType::Date: return "Date";
    case PrimType::Timestamp: return "Timestamp";
    case PrimType::List: return "List";
    case PrimType::Party: return "Party";
    case PrimType::ContractId: return "ContractId";
    case PrimType::Update: return "Update";
  }
  return "?";
}

std::optional<PrimType> prim_type_from_name(const std::string& s) {
  static const std::map<std::string, PrimType> table = {
      {"Unit", PrimType::Unit},         {"Bool", PrimType::Bool},
      {"Int64", PrimType::Int64},       {"Decimal", PrimType::Decimal},
      {"Text", PrimType::Text},         {"Date", PrimType::Date},
      {"Timestamp", PrimType::Timestamp}, {"List", PrimType::List},
      {"Party", PrimType::Party},       {"ContractId", PrimType::ContractId},
      {"Update", PrimType::Update},
  };
  auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

KindPtr prim_type_kind(PrimType p) {
  switch (p) {
    case PrimType::List:
    case PrimType::ContractId:
    case PrimType::Update:
      return kind_arrow(kind_star(), kind_star());
    default:
      return kind_star();
  }
}

TypePtr mk_tvar(std::string name, Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TVar{std::move(name)};
  t->span = std::move(sp);
  return t;
}
TypePtr mk_tfun_arrow(Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TFunArrow{};
  t->span = std::move(sp);
  return t;
}
TypePtr mk_tforall(std::string var, KindPtr kind, TypePtr body, Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TForall{std::move(var), std::move(kind), std::move(body)};
  t->span = std::move(sp);
  return t;
}
TypePtr mk_tapp(TypePtr fun, TypePtr arg, Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TApp{std::move(fun), std::move(arg)};
  t->span = std::move(sp);
  return t;
}
TypePtr mk_tprim(PrimType p, Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TPrim{p};
  t->span = std::move(sp);
  return t;
}
TypePtr mk_tnamed(QualName ref, Span sp) {
  auto t = std::make_shared<Type>();
  t->node = TNamed{std::move(ref)};
  t->span = std::move(sp);
  return t;
}

TypePtr mk_arrow(TypePtr a, TypePtr b) {
  return mk_tapp(mk_tapp(mk_tfun_arrow(), std::move(a)), std::move(b));
}

std::optional<std::pair<TypePtr, TypePtr>> as_arrow(const TypePtr& t) {
  auto* outer = std::get_if<TApp>(&t->node);
  if (!outer) return std::nullopt;
  auto* inner = std::get_if<TApp>(&outer->fun->node);
  if (!inner) return std::nullopt;
  if (!std::holds_alternative<TFunArrow>(inner->fun->node)) return std::nullopt;
  return std::make_pair(inner->arg, outer->arg);
}

std::optional<std::pair<PrimType, TypePtr>> as_prim_app(const TypePtr& t) {
  auto* app = std::get_if<TApp>(&t->node);
  if (!app) return std::nullopt;
  auto* prim = std::get_if<TPrim>(&app->fun->node);
  if (!prim) return std::nullopt;
  return std::make_pair(prim->prim, app->arg);
}

namespace {

using Renaming = std::vector<std::pair<std::string, std::string>>;

const std::string* lookup_rename(const Renaming& r, const std::string& n) {
  for (auto it = r.rbegin(); it != r.rend(); ++it)
    if (it->first == n) return &it->second;
  return nullptr;
}

bool type_equal_rec(const TypePtr& a, const TypePtr& b, Renaming& ra, Renaming& rb,
                    int& fresh) {
  if (a->node.index() != b->node.index()) return false;
  if (auto* va = std::get_if<TVar>(&a->node)) {
    const auto& vb = std::get<TVar>(b->node);
    const std::string* na = lookup_rename(ra, va->name);
    const std::string* nb = lookup_rename(rb, vb.name);
    if (na || nb) return na && nb && *na == *nb;
    return va->name == vb.name;
  }
  if (std::holds_alternative<TFunArrow>(a->node)) return true;
  if (auto* fa = std::get_if<TForall>(&a->node)) {
    const auto& fb = std::get<TForall>(b->node);
    if (!kind_equal(fa->kind, fb.kind)) return false;
    std::string canon = "$" + std::to_string(fresh++);
    ra.emplace_back(fa->var, canon);
    rb.emplace_back(fb.var, canon);
    bool ok = type_equal_rec(fa->body, fb.body, ra, rb, fresh);
    ra.pop_back();
    rb.pop_back();
    return ok;
  }
  if (auto* aa = std::get_if<TApp>(&a->node)) {
    const auto& ab = std::get<TApp>(b->node);
    return type_equal_rec(aa->fun, ab.fun, ra, rb, fresh) &&
           type_equal_rec(aa->arg, ab.arg, ra, rb, fresh);
  }
  if (auto* pa = std::get_if<TPrim>(&a->node))
    return pa->prim == std::get<TPrim>(b->node).prim;
  return std::get<TNamed>(a->node).ref == std::get<TNamed>(b->node).ref;
}

void free_type_vars(const TypePtr& t, std::vector<std::string>& bound,
                    std::vector<std::string>& out) {
  if (auto* v = std::get_if<TVar>(&t->node)) {
    if (std::find(bound.begin(), bound.end(), v->name) == bound.end())
      out.push_back(v->name);
  } else if (auto* f = std::get_if<TForall>(&t->node)) {
    bound.push_back(f->var);
    free_type_vars(f->body, bound, out);
    bound.pop_back();
  } else if (auto* a = std::get_if<TApp>(&t->node)) {
    free_type_vars(a->fun, bound, out);
    free_type_vars(a->arg, bound, out);
  }
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  Renaming ra, rb;
  int fresh = 0;
  return type_equal_rec(a, b, ra, rb, fresh);
}

std::vector<std::string> type_free_vars(const TypePtr& t) {
  std::vector<std::string> bound, out;
  free_type_vars(t, bound, out);
  return out;
}

TypePtr substitute_type(const TypePtr& body, const std::string& var,
                        const TypePtr& replacement) {
  if (auto* v = std::get_if<TVar>(&body->node))
    return v->name == var ? replacement : body;
  if (std::holds_alternative<TFunArrow>(body->node) ||
      std::holds_alternative<TPrim>(body->node) ||
      std::holds_alternative<TNamed>(body->node))
    return body;
  if (auto* a = std::get_if<TApp>(&body->node))
    return mk_tapp(substitute_type(a->fun, var, replacement),
                   substitute_type(a->arg, var, replacement), body->span);
  const auto& f = std::get<TForall>(body->node);
  if (f.var == var) return body;  // shadowed
  std::vector<std::string> bound, repl_free;
  free_type_vars(replacement, bound, repl_free);
  if (std::find(repl_free.begin(), repl_free.end(), f.var) != repl_free.end()) {
    // rename the binder to avoid capture
    std::string fresh = f.var;
    std::vector<std::string> body_free = type_free_vars(f.body);
    auto taken = [&](const std::string& n) {
      return n == var ||
             std::find(repl_free.begin(), repl_free.end(), n) != repl_free.end() ||
             std::find(body_free.begin(), body_free.end(), n) != body_free.end();
    };
    int i = 0;
    while (taken(fresh)) fresh = f.var + "_" + std::to_string(i++);
    TypePtr renamed = substitute_type(f.body, f.var, mk_tvar(fresh));
    return mk_tforall(fresh, f.kind, substitute_type(renamed, var, replacement),
                      body->span);
  }
  return mk_tforall(f.var, f.kind, substitute_type(f.body, var, replacement),
                    body->span);
}

// ---------------------------------------------------------------------------
// Literals / expressions
// ---------------------------------------------------------------------------

bool operator==(const Literal& a, const Literal& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case Literal::Tag::Unit: return true;
    case Literal::Tag::Bool: return a.b == b.b;
    case Literal::Tag::Int64:
    case Literal::Tag::Date:
    case Literal::Tag::Timestamp: return a.i == b.i;
    case Literal::Tag::Decimal: return a.dec == b.dec;
    case Literal::Tag::Text: return a.text == b.text;
  }
  return false;
}

namespace {

bool exprs_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!expr_equal(a[i], b[i])) return false;
  return true;
}

bool types_equal(const std::vector<TypePtr>& a, const std::vector<TypePtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!type_equal(a[i], b[i])) return false;
  return true;
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, EVar>) {
          return na.name == nb.name;
        } else if constexpr (std::is_same_v<T, ELam>) {
          return na.var == nb.var && type_equal(na.annot, nb.annot) &&
                 expr_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, EApp>) {
          return expr_equal(na.fun, nb.fun) && expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, ETyLam>) {
          return na.var == nb.var && kind_equal(na.kind, nb.kind) &&
                 expr_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, ETyApp>) {
          return expr_equal(na.fun, nb.fun) && type_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, ELit>) {
          return na.lit == nb.lit;
        } else if constexpr (std::is_same_v<T, EParty>) {
          return na.party == nb.party;
        } else if constexpr (std::is_same_v<T, EBuiltin>) {
          return na.name == nb.name && types_equal(na.type_args, nb.type_args) &&
                 exprs_equal(na.args, nb.args);
        } else if constexpr (std::is_same_v<T, ERecCon>) {
          if (na.ref != nb.ref || !types_equal(na.type_args, nb.type_args) ||
              na.fields.size() != nb.fields.size())
            return false;
          for (size_t i = 0; i < na.fields.size(); ++i)
            if (na.fields[i].first != nb.fields[i].first ||
                !expr_equal(na.fields[i].second, nb.fields[i].second))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, ERecProj>) {
          return na.ref == nb.ref && na.field == nb.field &&
                 expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, ERecUpd>) {
          return na.ref == nb.ref && na.field == nb.field &&
                 expr_equal(na.record, nb.record) && expr_equal(na.value, nb.value);
        } else if constexpr (std::is_same_v<T, EVarCon>) {
          return na.ref == nb.ref && types_equal(na.type_args, nb.type_args) &&
                 na.variant == nb.variant && expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, ECase>) {
          if (!expr_equal(na.scrutinee, nb.scrutinee) ||
              na.alts.size() != nb.alts.size())
            return false;
          for (size_t i = 0; i < na.alts.size(); ++i) {
            const auto& pa = na.alts[i].pat;
            const auto& pb = nb.alts[i].pat;
            if (pa.tag != pb.tag || pa.variant != pb.variant ||
                pa.bind1 != pb.bind1 || pa.bind2 != pb.bind2 ||
                !expr_equal(na.alts[i].body, nb.alts[i].body))
              return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, EValRef>) {
          return na.ref == nb.ref;
        } else if constexpr (std::is_same_v<T, EUpdatePure>) {
          return type_equal(na.type, nb.type) && expr_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, EUpdateBind>) {
          return na.var == nb.var && type_equal(na.type, nb.type) &&
                 expr_equal(na.bound, nb.bound) && expr_equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, EUpdateCreate>) {
          return na.template_ref == nb.template_ref && expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, EUpdateFetch>) {
          return na.template_ref == nb.template_ref && expr_equal(na.cid, nb.cid);
        } else if constexpr (std::is_same_v<T, EUpdateExercise>) {
          return na.template_ref == nb.template_ref && na.choice == nb.choice &&
                 expr_equal(na.cid, nb.cid) && expr_equal(na.arg, nb.arg);
        } else if constexpr (std::is_same_v<T, ECidLeq>) {
          return type_equal(na.type_arg, nb.type_arg) &&
                 expr_equal(na.lhs, nb.lhs) && expr_equal(na.rhs, nb.rhs);
        }
      },
      a->node);
}

// ---------------------------------------------------------------------------
// Definitions
// ---------------------------------------------------------------------------

const ChoiceDef* TemplateDef::find_choice(const std::string& n) const {
  for (const auto& c : choices)
    if (c.name == n) return &c;
  return nullptr;
}

const RecordDef* Module::find_record(const std::string& n) const {
  for (const auto& r : records)
    if (r.name == n) return &r;
  return nullptr;
}
const VariantDef* Module::find_variant(const std::string& n) const {
  for (const auto& v : variants)
    if (v.name == n) return &v;
  return nullptr;
}
const ValueDef* Module::find_value(const std::string& n) const {
  for (const auto& v : values)
    if (v.name == n) return &v;
  return nullptr;
}
const TemplateDef* Module::find_template(const std::string& n) const {
  for (const auto& t : templates)
    if (t.name == n) return &t;
  return nullptr;
}
const Module* Package::find_module(const std::string& n) const {
  for (const auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

namespace {

bool choice_equal(const ChoiceDef& a, const ChoiceDef& b) {
  return a.name == b.name && a.kind == b.kind && a.arg_var == b.arg_var &&
         type_equal(a.arg_type, b.arg_type) &&
         type_equal(a.result_type, b.result_type) &&
         expr_equal(a.controllers, b.controllers) &&
         expr_equal(a.choice_observers, b.choice_observers) &&
         expr_equal(a.body, b.body);
}

bool module_equal(const Module& a, const Module& b) {
  if (a.name != b.name || a.records.size() != b.records.size() ||
      a.variants.size() != b.variants.size() || a.values.size() != b.values.size() ||
      a.templates.size() != b.templates.size())
    return false;
  auto params_eq = [](const std::vector<TypeParam>& x, const std::vector<TypeParam>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].var != y[i].var || !kind_equal(x[i].kind, y[i].kind)) return false;
    return true;
  };
  for (size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (ra.name != rb.name || !params_eq(ra.params, rb.params) ||
        ra.fields.size() != rb.fields.size())
      return false;
    for (size_t j = 0; j < ra.fields.size(); ++j)
      if (ra.fields[j].first != rb.fields[j].first ||
          !type_equal(ra.fields[j].second, rb.fields[j].second))
        return false;
  }
  for (size_t i = 0; i < a.variants.size(); ++i) {
    const auto& va = a.variants[i];
    const auto& vb = b.variants[i];
    if (va.name != vb.name || !params_eq(va.params, vb.params) ||
        va.constructors.size() != vb.constructors.size())
      return false;
    for (size_t j = 0; j < va.constructors.size(); ++j)
      if (va.constructors[j].first != vb.constructors[j].first ||
          !type_equal(va.constructors[j].second, vb.constructors[j].second))
        return false;
  }
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i].name != b.values[i].name ||
        !type_equal(a.values[i].type, b.values[i].type) ||
        !expr_equal(a.values[i].body, b.values[i].body))
      return false;
  }
  for (size_t i = 0; i < a.templates.size(); ++i) {
    const auto& ta = a.templates[i];
    const auto& tb = b.templates[i];
    if (ta.name != tb.name || ta.param_var != tb.param_var ||
        !expr_equal(ta.ensure, tb.ensure) ||
        !expr_equal(ta.signatories, tb.signatories) ||
        !expr_equal(ta.observers, tb.observers) ||
        ta.choices.size() != tb.choices.size())
      return false;
    for (size_t j = 0; j < ta.choices.size(); ++j)
      if (!choice_equal(ta.choices[j], tb.choices[j])) return false;
  }
  return true;
}

}  // namespace

bool package_equal(const Package& a, const Package& b) {
  if (a.modules.size() != b.modules.size()) return false;
  for (size_t i = 0; i < a.modules.size(); ++i)
    if (!module_equal(a.modules[i], b.modules[i])) return false;
  return true;
}

void canonicalize(Package& pkg) {
  auto by_name = [](const auto& x, const auto& y) { return x.name < y.name; };
  for (auto& m : pkg.modules) {
    std::stable_sort(m.records.begin(), m.records.end(), by_name);
    std::stable_sort(m.variants.begin(), m.variants.end(), by_name);
    std::stable_sort(m.values.begin(), m.values.end(), by_name);
    std::stable_sort(m.templates.begin(), m.templates.end(), by_name);
    for (auto& t : m.templates)
      std::stable_sort(t.choices.begin(), t.choices.end(), by_name);
  }
  std::stable_sort(pkg.modules.begin(), pkg.modules.end(), by_name);
}

ChoiceDef synthesize_archive(const TemplateDef& t) {
  ChoiceDef c;
  c.name = kArchiveChoiceName;
  c.kind = ChoiceKind::Consuming;
  c.arg_var = "_arg";
  c.arg_type = mk_tprim(PrimType::Unit);
  c.result_type = mk_tprim(PrimType::Unit);
  c.controllers = t.signatories;
  c.choice_observers = mk_expr(EBuiltin{"nil", {mk_tprim(PrimType::Party)}, {}});
  Literal unit;
  unit.tag = Literal::Tag::Unit;
  c.body = mk_expr(EUpdatePure{mk_tprim(PrimType::Unit), mk_expr(ELit{unit})});
  return c;
}

}  // namespace lf
