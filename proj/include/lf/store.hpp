#pragma once

#include <map>
#include <memory>
#include <vector>

#include "lf/ast.hpp"

namespace lf {

// Loaded packages indexed by module name. Module names are globally unique
// across loaded packages; packages form a DAG (enforced on load).
class PackageStore {
 public:
  // Returns false if a module of the same name is already loaded.
  bool add(Package pkg);

  const Module* find_module(const std::string& name) const;
  const RecordDef* find_record(const QualName& q) const;
  const VariantDef* find_variant(const QualName& q) const;
  const ValueDef* find_value(const QualName& q) const;
  const TemplateDef* find_template(const QualName& q) const;

  const std::vector<std::shared_ptr<const Package>>& packages() const {
    return packages_;
  }

 private:
  std::vector<std::shared_ptr<const Package>> packages_;
  std::map<std::string, const Module*> modules_;
};

}  // namespace lf
