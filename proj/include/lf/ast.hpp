#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lf {

// Source location attached to AST nodes for diagnostics.
// Ignored by structural equality.
struct Span {
  std::string file;
  int start_line = 0, start_col = 0;
  int end_line = 0, end_col = 0;
};

// module-qualified entity name; module may be empty before resolution
// (meaning "current module").
struct QualName {
  std::string module;
  std::string name;

  friend bool operator==(const QualName& a, const QualName& b) {
    return a.module == b.module && a.name == b.name;
  }
  friend auto operator<=>(const QualName& a, const QualName& b) = default;
  std::string str() const { return module.empty() ? name : module + ":" + name; }
};

// ---------------------------------------------------------------------------
// Kinds
// ---------------------------------------------------------------------------

struct Kind;
using KindPtr = std::shared_ptr<const Kind>;

struct Kind {
  // star iff !param; otherwise param -> result
  KindPtr param;
  KindPtr result;

  bool is_star() const { return param == nullptr; }
};

KindPtr kind_star();
KindPtr kind_arrow(KindPtr param, KindPtr result);
bool kind_equal(const KindPtr& a, const KindPtr& b);
std::string kind_to_string(const KindPtr& k);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class PrimType {
  Unit, Bool, Int64, Decimal, Text, Date, Timestamp,
  List, Party, ContractId, Update,
};

const char* prim_type_name(PrimType p);
std::optional<PrimType> prim_type_from_name(const std::string& s);
KindPtr prim_type_kind(PrimType p);

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct TVar { std::string name; };
struct TFunArrow {};  // the primitive => constructor, kind * -> * -> *
struct TForall { std::string var; KindPtr kind; TypePtr body; };
struct TApp { TypePtr fun; TypePtr arg; };
struct TPrim { PrimType prim; };
struct TNamed { QualName ref; };

struct Type {
  std::variant<TVar, TFunArrow, TForall, TApp, TPrim, TNamed> node;
  Span span;
};

TypePtr mk_tvar(std::string name, Span sp = {});
TypePtr mk_tfun_arrow(Span sp = {});
TypePtr mk_tforall(std::string var, KindPtr kind, TypePtr body, Span sp = {});
TypePtr mk_tapp(TypePtr fun, TypePtr arg, Span sp = {});
TypePtr mk_tprim(PrimType p, Span sp = {});
TypePtr mk_tnamed(QualName ref, Span sp = {});

// App(App(=>, a), b)
TypePtr mk_arrow(TypePtr a, TypePtr b);
// If t is a fully applied arrow, return its (param, result).
std::optional<std::pair<TypePtr, TypePtr>> as_arrow(const TypePtr& t);
// If t is App(Prim p, arg), return (p, arg).
std::optional<std::pair<PrimType, TypePtr>> as_prim_app(const TypePtr& t);

bool type_equal(const TypePtr& a, const TypePtr& b);  // alpha-equivalence
std::string type_to_string(const TypePtr& t);

// capture-avoiding substitution body[var := replacement]
TypePtr substitute_type(const TypePtr& body, const std::string& var,
                        const TypePtr& replacement);

// ---------------------------------------------------------------------------
// Literals
// ---------------------------------------------------------------------------

// Decimal: scaled integer with 10 fractional digits, at most 38 significant
// digits. |scaled| < 10^38.
struct DecimalLit {
  __int128 scaled = 0;
  friend bool operator==(const DecimalLit& a, const DecimalLit& b) {
    return a.scaled == b.scaled;
  }
};

struct Literal {
  enum class Tag { Unit, Bool, Int64, Decimal, Text, Date, Timestamp } tag;
  bool b = false;
  std::int64_t i = 0;          // Int64, Date (days since epoch), Timestamp (micros)
  DecimalLit dec{};
  std::string text;
  friend bool operator==(const Literal& a, const Literal& b);
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct EVar { std::string name; };
struct ELam { std::string var; TypePtr annot; ExprPtr body; };
struct EApp { ExprPtr fun; ExprPtr arg; };
struct ETyLam { std::string var; KindPtr kind; ExprPtr body; };
struct ETyApp { ExprPtr fun; TypePtr arg; };
struct ELit { Literal lit; };
struct EParty { std::string party; };
// saturated builtin application
struct EBuiltin {
  std::string name;
  std::vector<TypePtr> type_args;
  std::vector<ExprPtr> args;
};
struct ERecCon {
  QualName ref;
  std::vector<TypePtr> type_args;
  std::vector<std::pair<std::string, ExprPtr>> fields;
};
struct ERecProj { QualName ref; std::string field; ExprPtr arg; };
struct ERecUpd { QualName ref; std::string field; ExprPtr record; ExprPtr value; };
struct EVarCon {
  QualName ref;
  std::vector<TypePtr> type_args;
  std::string variant;
  ExprPtr arg;
};

struct CasePattern {
  enum class Tag { Default, BoolTrue, BoolFalse, Nil, Cons, Variant } tag;
  std::string variant;             // Variant
  std::string bind1, bind2;        // Variant binder / Cons head+tail
};
struct CaseAlt { CasePattern pat; ExprPtr body; };
struct ECase { ExprPtr scrutinee; std::vector<CaseAlt> alts; };

struct EValRef { QualName ref; };
struct EUpdatePure { TypePtr type; ExprPtr body; };
struct EUpdateBind { std::string var; TypePtr type; ExprPtr bound; ExprPtr body; };
struct EUpdateCreate { QualName template_ref; ExprPtr arg; };
struct EUpdateFetch { QualName template_ref; ExprPtr cid; };
struct EUpdateExercise {
  QualName template_ref;
  std::string choice;
  ExprPtr cid;
  ExprPtr arg;
};
struct ECidLeq { TypePtr type_arg; ExprPtr lhs; ExprPtr rhs; };

struct Expr {
  std::variant<EVar, ELam, EApp, ETyLam, ETyApp, ELit, EParty, EBuiltin,
               ERecCon, ERecProj, ERecUpd, EVarCon, ECase, EValRef,
               EUpdatePure, EUpdateBind, EUpdateCreate, EUpdateFetch,
               EUpdateExercise, ECidLeq>
      node;
  Span span;
};

template <class Node>
ExprPtr mk_expr(Node n, Span sp = {}) {
  auto e = std::make_shared<Expr>();
  e->node = std::move(n);
  e->span = std::move(sp);
  return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b);  // structural, spans ignored

// ---------------------------------------------------------------------------
// Definitions
// ---------------------------------------------------------------------------

struct TypeParam { std::string var; KindPtr kind; };

struct RecordDef {
  std::string name;
  std::vector<TypeParam> params;
  std::vector<std::pair<std::string, TypePtr>> fields;
};

struct VariantDef {
  std::string name;
  std::vector<TypeParam> params;
  std::vector<std::pair<std::string, TypePtr>> constructors;
};

struct ValueDef {
  std::string name;
  TypePtr type;
  ExprPtr body;
};

enum class ChoiceKind { Consuming, Nonconsuming };

struct ChoiceDef {
  std::string name;
  ChoiceKind kind = ChoiceKind::Consuming;
  std::string arg_var;
  TypePtr arg_type;
  TypePtr result_type;
  ExprPtr controllers;       // Party list over contract arg and choice arg
  ExprPtr choice_observers;  // Party list, possibly the constant empty list
  ExprPtr body;              // Update result_type
};

struct TemplateDef {
  std::string name;  // names the contract-argument record in the same module
  std::string param_var;
  ExprPtr ensure;
  ExprPtr signatories;
  ExprPtr observers;
  std::vector<ChoiceDef> choices;

  const ChoiceDef* find_choice(const std::string& n) const;
};

struct Module {
  std::string name;
  std::vector<RecordDef> records;
  std::vector<VariantDef> variants;
  std::vector<ValueDef> values;
  std::vector<TemplateDef> templates;

  const RecordDef* find_record(const std::string& n) const;
  const VariantDef* find_variant(const std::string& n) const;
  const ValueDef* find_value(const std::string& n) const;
  const TemplateDef* find_template(const std::string& n) const;
};

// 32-byte digest rendered as lowercase hex
struct PackageId {
  std::string hex;
  friend bool operator==(const PackageId& a, const PackageId& b) {
    return a.hex == b.hex;
  }
  friend auto operator<=>(const PackageId& a, const PackageId& b) = default;
};

struct Package {
  PackageId id;  // derived from content, not authored
  std::vector<Module> modules;

  const Module* find_module(const std::string& n) const;
};

bool package_equal(const Package& a, const Package& b);

// Sorts modules and definitions into canonical order (by name).
void canonicalize(Package& pkg);

// The implicit Archive choice: consuming, Unit argument and result,
// controllers = the template's signatory expression, body = pure unit.
ChoiceDef synthesize_archive(const TemplateDef& t);

constexpr const char* kArchiveChoiceName = "Archive";

}  // namespace lf
