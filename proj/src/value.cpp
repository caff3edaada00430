#include "lf/value.hpp"

#include <sstream>

#include "lf/decimal.hpp"
#include "lf/time.hpp"

namespace lf {

Env Env::extend(std::string name, ValuePtr val) const {
  Env e;
  e.head_ = std::make_shared<Node>(Node{std::move(name), std::move(val), head_});
  return e;
}

const ValuePtr* Env::lookup(const std::string& name) const {
  for (const Node* n = head_.get(); n; n = n->next.get())
    if (n->name == name) return &n->val;
  return nullptr;
}

const ValuePtr* RecV::field(const std::string& f) const {
  for (const auto& [name, v] : fields)
    if (name == f) return &v;
  return nullptr;
}

bool value_equal(const ValuePtr& a, const ValuePtr& b) {
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, UnitV>) {
          return true;
        } else if constexpr (std::is_same_v<T, BoolV>) {
          return x.b == y.b;
        } else if constexpr (std::is_same_v<T, Int64V>) {
          return x.i == y.i;
        } else if constexpr (std::is_same_v<T, DecimalV>) {
          return x.d == y.d;
        } else if constexpr (std::is_same_v<T, TextV>) {
          return x.s == y.s;
        } else if constexpr (std::is_same_v<T, DateV>) {
          return x.days == y.days;
        } else if constexpr (std::is_same_v<T, TimestampV>) {
          return x.micros == y.micros;
        } else if constexpr (std::is_same_v<T, PartyV>) {
          return x.party == y.party;
        } else if constexpr (std::is_same_v<T, ContractIdV>) {
          return x.id == y.id;
        } else if constexpr (std::is_same_v<T, ListV>) {
          if (x.items.size() != y.items.size()) return false;
          for (size_t i = 0; i < x.items.size(); ++i)
            if (!value_equal(x.items[i], y.items[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, RecV>) {
          if (!(x.ref == y.ref) || x.fields.size() != y.fields.size())
            return false;
          for (size_t i = 0; i < x.fields.size(); ++i)
            if (x.fields[i].first != y.fields[i].first ||
                !value_equal(x.fields[i].second, y.fields[i].second))
              return false;
          return true;
        } else if constexpr (std::is_same_v<T, VarV>) {
          return x.ref == y.ref && x.ctor == y.ctor &&
                 value_equal(x.arg, y.arg);
        } else {
          return false;  // closures and updates have no structural equality
        }
      },
      a->node);
}

std::string value_to_string(const ValuePtr& v) {
  std::ostringstream os;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UnitV>) {
          os << "unit";
        } else if constexpr (std::is_same_v<T, BoolV>) {
          os << (x.b ? "true" : "false");
        } else if constexpr (std::is_same_v<T, Int64V>) {
          os << x.i;
        } else if constexpr (std::is_same_v<T, DecimalV>) {
          os << decimal_to_string(x.d);
        } else if constexpr (std::is_same_v<T, TextV>) {
          os << '"' << x.s << '"';
        } else if constexpr (std::is_same_v<T, DateV>) {
          os << render_date(x.days);
        } else if constexpr (std::is_same_v<T, TimestampV>) {
          os << render_timestamp(x.micros);
        } else if constexpr (std::is_same_v<T, PartyV>) {
          os << x.party;
        } else if constexpr (std::is_same_v<T, ContractIdV>) {
          os << '#' << x.id;
        } else if constexpr (std::is_same_v<T, ListV>) {
          os << '[';
          for (size_t i = 0; i < x.items.size(); ++i) {
            if (i) os << ", ";
            os << value_to_string(x.items[i]);
          }
          os << ']';
        } else if constexpr (std::is_same_v<T, RecV>) {
          os << '(' << x.ref.name;
          for (const auto& [f, fv] : x.fields)
            os << ' ' << f << '=' << value_to_string(fv);
          os << ')';
        } else if constexpr (std::is_same_v<T, VarV>) {
          os << '(' << x.ctor << ' ' << value_to_string(x.arg) << ')';
        } else if constexpr (std::is_same_v<T, ClosureV> ||
                             std::is_same_v<T, TyClosureV>) {
          os << "<function>";
        } else {
          os << "<update>";
        }
      },
      v->node);
  return os.str();
}

std::set<std::string> party_set(const ValuePtr& v) {
  std::set<std::string> out;
  if (auto* l = std::get_if<ListV>(&v->node))
    for (const auto& item : l->items)
      if (auto* p = std::get_if<PartyV>(&item->node)) out.insert(p->party);
  return out;
}

}  // namespace lf
