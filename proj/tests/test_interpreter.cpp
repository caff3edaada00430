#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "lf/interpreter.hpp"

using namespace lf;
using lftest::load_corpus;
using lftest::load_text;

namespace {

// Evaluates `(value probe ...)` appended to module M of the given text.
ValuePtr eval_value(const PackageStore& store, const QualName& ref) {
  Interpreter interp(store);
  const ValueDef* v = store.find_value(ref);
  REQUIRE(v != nullptr);
  return interp.eval(Env{}, v->body);
}

std::int64_t eval_int(const PackageStore& store, const std::string& expr) {
  PackageStore s2;  // throwaway store holding the probe module
  std::vector<Package> pkgs;
  pkgs.push_back(
      parse_package("(module Probe (value probe Int64 " + expr + "))", "p"));
  // copy already-loaded packages so probe can reference them
  for (const auto& p : store.packages()) pkgs.push_back(*p);
  load_packages(s2, std::move(pkgs));
  ValuePtr v = eval_value(s2, QualName{"Probe", "probe"});
  return std::get<Int64V>(v->node).i;
}

}  // namespace

TEST_CASE("factorial via the fixpoint combinator") {
  PackageStore store = load_corpus({"tree.lf"});
  CHECK(eval_int(store, "(Tree:fact 10)") == 3628800);
  CHECK(eval_int(store, "(Tree:fact 0)") == 1);
  CHECK(eval_int(store, "(Tree:fact 1)") == 1);
  CHECK(eval_int(store, "(Tree:fact 12)") == 479001600);
}

TEST_CASE("mutual recursion: even/odd agrees with parity on 0..64") {
  PackageStore store = load_corpus({"tree.lf"});
  Interpreter interp(store);
  const ValueDef* even = store.find_value(QualName{"Tree", "even"});
  const ValueDef* odd = store.find_value(QualName{"Tree", "odd"});
  REQUIRE(even != nullptr);
  REQUIRE(odd != nullptr);
  for (int n = 0; n <= 64; ++n) {
    ExprPtr num = mk_expr(ELit{Literal{Literal::Tag::Int64, false, n, {}, ""}});
    for (bool use_even : {true, false}) {
      ExprPtr call = mk_expr(
          EApp{mk_expr(EValRef{QualName{"Tree", use_even ? "even" : "odd"}}),
               num});
      ValuePtr v = interp.eval(Env{}, call);
      bool expected = use_even ? (n % 2 == 0) : (n % 2 == 1);
      CHECK(std::get<BoolV>(v->node).b == expected);
    }
  }
}

TEST_CASE("sumTree folds over a recursive datatype") {
  PackageStore store = load_corpus({"tree.lf"});
  std::int64_t r = eval_int(
      store,
      "(Tree:sumTree (con Tree:Tree Node @Int64 (rec Tree:Node3 @Int64"
      " (left (con Tree:Tree Node @Int64 (rec Tree:Node3 @Int64"
      "   (left (con Tree:Tree Leaf @Int64 unit)) (label 1)"
      "   (right (con Tree:Tree Leaf @Int64 unit)))))"
      " (label 2)"
      " (right (con Tree:Tree Leaf @Int64 unit)))))");
  CHECK(r == 3);
}

TEST_CASE("builtins: integer arithmetic, overflow, division") {
  PackageStore store;
  CHECK(eval_int(store, "(addi 2 3)") == 5);
  CHECK(eval_int(store, "(divi 7 2)") == 3);
  CHECK(eval_int(store, "(divi -7 2)") == -3);  // truncation toward zero
  CHECK(eval_int(store, "(modi -7 2)") == -1);
  CHECK_THROWS_AS(eval_int(store, "(divi 1 0)"), RuntimeError);
  CHECK_THROWS_AS(eval_int(store, "(modi 1 0)"), RuntimeError);
  CHECK_THROWS_AS(
      eval_int(store, "(addi 9223372036854775807 1)"), RuntimeError);
  CHECK_THROWS_AS(
      eval_int(store, "(muli 4611686018427387904 2)"), RuntimeError);
  try {
    eval_int(store, "(divi 1 0)");
  } catch (const RuntimeError& e) {
    CHECK(e.cls == RuntimeErrorClass::DivideByZero);
  }
}

TEST_CASE("builtins: comparisons, text, lists") {
  PackageStore store;
  CHECK(eval_int(store, "(case (lti 1 2) (true 1) (false 0))") == 1);
  CHECK(eval_int(store, "(case (eqt \"ab\" (appt \"a\" \"b\")) (true 1) (false 0))") == 1);
  CHECK(eval_int(store,
                 "(case (cons @Int64 7 (nil @Int64)) ((cons h t) h) (nil 0))") ==
        7);
  CHECK(eval_int(store, "(case (nil @Int64) ((cons h t) h) (nil 42))") == 42);
  CHECK(eval_int(store,
                 "(case (eqp (party Alice) (party Alice)) (true 1) (false 0))") ==
        1);
  CHECK(eval_int(store,
                 "(case (ltdate 2020-01-01 2020-01-02) (true 1) (false 0))") ==
        1);
}

TEST_CASE("builtins: decimals round half-even and guard the range") {
  PackageStore store;
  CHECK(eval_int(store, "(case (eqd (divd 2.0 3.0) 0.6666666667) (true 1) (false 0))") == 1);
  CHECK_THROWS_AS(eval_int(store, "(case (eqd (divd 1.0 0.0) 0.0) (true 1) (false 0))"),
                  RuntimeError);
  CHECK_THROWS_AS(
      eval_int(store,
               "(case (eqd (muld 9999999999999999999999999999.0"
               " 9999999999999999999999999999.0) 0.0) (true 1) (false 0))"),
      RuntimeError);
}

TEST_CASE("abort raises with its message") {
  PackageStore store;
  try {
    eval_int(store, "(abort @Int64 \"boom\")");
    FAIL("expected abort");
  } catch (const RuntimeError& e) {
    CHECK(e.cls == RuntimeErrorClass::Abort);
    CHECK(std::string(e.what()) == "boom");
  }
}

TEST_CASE("value references are re-evaluated on demand") {
  // a divergent value does not prevent loading; forcing it under a lambda
  // terminates only when applied
  PackageStore store = load_text(
      "(module M"
      " (value loopy (=> Int64 Int64) (lam (n Int64) (loopy n)))"
      " (value ok Int64 42))");
  CHECK(eval_int(store, "M:ok") == 42);
}

TEST_CASE("records and variants evaluate structurally") {
  PackageStore store = load_text(
      "(module M (record P () (x Int64) (y Int64))"
      " (value p P (rec P (x 1) (y 2)))"
      " (value q P (upd P y M:p 9)))");
  Interpreter interp(store);
  ValuePtr q = eval_value(store, QualName{"M", "q"});
  const RecV& rec = std::get<RecV>(q->node);
  CHECK(std::get<Int64V>((*rec.field("x"))->node).i == 1);
  CHECK(std::get<Int64V>((*rec.field("y"))->node).i == 9);
  // the original is unchanged (values are immutable)
  ValuePtr p = eval_value(store, QualName{"M", "p"});
  CHECK(std::get<Int64V>((*std::get<RecV>(p->node).field("y"))->node).i == 2);
}

TEST_CASE("update interpretation: create, fetch, exercise") {
  PackageStore store = load_corpus({"iou.lf"});
  Interpreter interp(store);
  LedgerState state;

  auto mk_iou =
      "(create @Iou:SimpleIou (rec Iou:SimpleIou (issuer (party Bank))"
      " (owner (party Alice))"
      " (cash (rec Iou:Cash (currency \"USD\") (amount 100.0)))))";
  PackageStore s2;
  {
    std::vector<Package> pkgs;
    pkgs.push_back(parse_package(
        std::string("(module Probe (value probe (Update (ContractId "
                    "Iou:SimpleIou)) ") + mk_iou + "))",
        "p"));
    for (const auto& p : store.packages()) pkgs.push_back(*p);
    load_packages(s2, std::move(pkgs));
  }
  Interpreter interp2(s2);
  ValuePtr upd = interp2.eval(Env{}, s2.find_value(QualName{"Probe", "probe"})->body);

  // signatory Bank must authorize
  CHECK_THROWS_AS(interp2.interpret(upd, {"Alice"}, state), RuntimeError);
  CHECK(state.contracts.empty());

  auto r = interp2.interpret(upd, {"Bank"}, state);
  CHECK(std::get<ContractIdV>(r.value->node).id == 1);
  REQUIRE(r.tx.size() == 1);
  const CreateA& c = std::get<CreateA>(r.tx[0]->node);
  CHECK(c.cid == 1);
  CHECK(c.signatories == std::set<std::string>{"Bank"});
  CHECK(c.observers == std::set<std::string>{"Alice"});
  CHECK(state.contracts.at(1).active);
  CHECK(state.next_id == 2);
}

TEST_CASE("contract ids are allocated sequentially") {
  PackageStore store = load_corpus({"iou.lf"});
  std::string create_expr =
      "(create @Iou:SimpleIou (rec Iou:SimpleIou (issuer (party Bank))"
      " (owner (party Alice))"
      " (cash (rec Iou:Cash (currency \"USD\") (amount 1.0)))))";
  std::vector<Package> pkgs;
  pkgs.push_back(parse_package(
      "(module Probe (value probe (Update (ContractId Iou:SimpleIou))"
      " (bind (a (ContractId Iou:SimpleIou) " + create_expr + ")"
      " (bind (b (ContractId Iou:SimpleIou) " + create_expr + ")"
      " " + create_expr + "))))", "p"));
  for (const auto& p : store.packages()) pkgs.push_back(*p);
  PackageStore s2;
  load_packages(s2, std::move(pkgs));
  Interpreter interp(s2);
  LedgerState state;
  ValuePtr upd = interp.eval(Env{}, s2.find_value(QualName{"Probe", "probe"})->body);
  auto r = interp.interpret(upd, {"Bank"}, state);
  CHECK(std::get<ContractIdV>(r.value->node).id == 3);
  CHECK(r.tx.size() == 3);
  CHECK(state.next_id == 4);
}

TEST_CASE("cid_le orders contract ids by allocation") {
  PackageStore store = load_corpus({"iou.lf"});
  std::string create_expr =
      "(create @Iou:SimpleIou (rec Iou:SimpleIou (issuer (party Bank))"
      " (owner (party Alice))"
      " (cash (rec Iou:Cash (currency \"USD\") (amount 1.0)))))";
  std::vector<Package> pkgs;
  pkgs.push_back(parse_package(
      "(module Probe (value probe (Update Bool)"
      " (bind (a (ContractId Iou:SimpleIou) " + create_expr + ")"
      " (bind (b (ContractId Iou:SimpleIou) " + create_expr + ")"
      " (pure @Bool (cid_le @Iou:SimpleIou a b))))))", "p"));
  for (const auto& p : store.packages()) pkgs.push_back(*p);
  PackageStore s2;
  load_packages(s2, std::move(pkgs));
  Interpreter interp(s2);
  LedgerState state;
  ValuePtr upd = interp.eval(Env{}, s2.find_value(QualName{"Probe", "probe"})->body);
  auto r = interp.interpret(upd, {"Bank"}, state);
  CHECK(std::get<BoolV>(r.value->node).b);
}
