#include "lf/store.hpp"

namespace lf {

bool PackageStore::add(Package pkg) {
  for (const auto& m : pkg.modules)
    if (modules_.count(m.name)) return false;
  auto owned = std::make_shared<const Package>(std::move(pkg));
  for (const auto& m : owned->modules) modules_[m.name] = &m;
  packages_.push_back(std::move(owned));
  return true;
}

const Module* PackageStore::find_module(const std::string& name) const {
  auto it = modules_.find(name);
  return it == modules_.end() ? nullptr : it->second;
}

const RecordDef* PackageStore::find_record(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_record(q.name) : nullptr;
}
const VariantDef* PackageStore::find_variant(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_variant(q.name) : nullptr;
}
const ValueDef* PackageStore::find_value(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_value(q.name) : nullptr;
}
const TemplateDef* PackageStore::find_template(const QualName& q) const {
  const Module* m = find_module(q.module);
  return m ? m->find_template(q.name) : nullptr;
}

}  // namespace lf
