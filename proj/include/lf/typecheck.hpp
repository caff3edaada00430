#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lf/ast.hpp"
#include "lf/store.hpp"

namespace lf {

enum class TypeErrorClass {
  UnboundVar,
  KindMismatch,
  TypeMismatch,
  NotSaturated,
  NotSerializable,
  UnknownRef,
  NonEmptySignatoryUnprovable,
  BadTemplate,
  CyclicPackageDependency,
};

const char* type_error_class_name(TypeErrorClass c);

struct TypeError : std::runtime_error {
  TypeErrorClass cls;
  Span span;
  TypeError(TypeErrorClass c, Span sp, const std::string& msg)
      : std::runtime_error(msg), cls(c), span(std::move(sp)) {}
  // file:line:col: class: message
  std::string render() const;
};

// Typing/kinding environment. The store provides Named-reference resolution;
// `current` (optional) is the package under check, consulted before the store
// so that mutually recursive definitions within it resolve.
class Context {
 public:
  Context(const PackageStore& store, const Package* current = nullptr)
      : store_(store), current_(current) {}

  const PackageStore& store() const { return store_; }

  void push_kind(const std::string& var, KindPtr k);
  void pop_kind();
  const KindPtr* lookup_kind(const std::string& var) const;

  void push_type(const std::string& var, TypePtr t);
  void pop_type();
  const TypePtr* lookup_type(const std::string& var) const;

  const Module* find_module(const std::string& name) const;
  const RecordDef* find_record(const QualName& q) const;
  const VariantDef* find_variant(const QualName& q) const;
  const ValueDef* find_value(const QualName& q) const;
  const TemplateDef* find_template(const QualName& q) const;

 private:
  const PackageStore& store_;
  const Package* current_;
  std::vector<std::pair<std::string, KindPtr>> kinds_;
  std::vector<std::pair<std::string, TypePtr>> types_;
};

KindPtr kind_of(Context& ctx, const TypePtr& t);
TypePtr type_of(Context& ctx, const ExprPtr& e);
bool is_serializable(Context& ctx, const TypePtr& t);
void check_template(Context& ctx, const Module& mod, const TemplateDef& t);
// Checks the whole package against the already loaded set.
void check_package(const PackageStore& store, const Package& pkg);

// Orders packages so that referenced modules are loaded first, typechecks
// each, and adds them to the store. Throws CyclicPackageDependency on cycles.
void load_packages(PackageStore& store, std::vector<Package> pkgs);

}  // namespace lf
