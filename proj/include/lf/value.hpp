#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lf/ast.hpp"

namespace lf {

struct Value;
using ValuePtr = std::shared_ptr<const Value>;

// Persistent environment: extension shares the tail, so closures capture
// cheaply and older frames stay valid.
class Env {
 public:
  Env() = default;
  Env extend(std::string name, ValuePtr val) const;
  const ValuePtr* lookup(const std::string& name) const;

 private:
  struct Node {
    std::string name;
    ValuePtr val;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

struct UnitV {};
struct BoolV { bool b; };
struct Int64V { std::int64_t i; };
struct DecimalV { DecimalLit d; };
struct TextV { std::string s; };
struct DateV { std::int64_t days; };
struct TimestampV { std::int64_t micros; };
struct PartyV { std::string party; };
struct ContractIdV { std::int64_t id; };
struct ListV { std::vector<ValuePtr> items; };
struct RecV {
  QualName ref;
  std::vector<std::pair<std::string, ValuePtr>> fields;
  const ValuePtr* field(const std::string& f) const;
};
struct VarV { QualName ref; std::string ctor; ValuePtr arg; };
struct ClosureV { Env env; std::string var; ExprPtr body; };
struct TyClosureV { Env env; ExprPtr body; };
// A suspended ledger-effecting computation; forced only by interpretation.
struct UpdateV { Env env; ExprPtr expr; };

struct Value {
  std::variant<UnitV, BoolV, Int64V, DecimalV, TextV, DateV, TimestampV,
               PartyV, ContractIdV, ListV, RecV, VarV, ClosureV, TyClosureV,
               UpdateV>
      node;
};

template <class Node>
ValuePtr mk_value(Node n) {
  auto v = std::make_shared<Value>();
  v->node = std::move(n);
  return v;
}

// Structural equality on ground (function-free, update-free) values.
bool value_equal(const ValuePtr& a, const ValuePtr& b);

// Single-line rendering: records as (Name f=v ...), parties bare, cids as #N.
std::string value_to_string(const ValuePtr& v);

// Evaluates a party-list value to a sorted party set.
std::set<std::string> party_set(const ValuePtr& v);

}  // namespace lf
