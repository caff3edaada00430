#include <sstream>

#include "lf/decimal.hpp"
#include "lf/parser.hpp"
#include "lf/time.hpp"

namespace lf {

namespace {

// Canonical form always qualifies named references; this keeps re-parsing
// independent of the binder environment.

std::string quote_text(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\\\"";
    else if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void print_kind(std::ostream& os, const KindPtr& k) {
  if (k->is_star()) {
    os << "*";
    return;
  }
  os << "(-> ";
  print_kind(os, k->param);
  os << " ";
  print_kind(os, k->result);
  os << ")";
}

void print_type(std::ostream& os, const TypePtr& t) {
  if (auto arrow = as_arrow(t)) {
    os << "(=> ";
    print_type(os, arrow->first);
    os << " ";
    print_type(os, arrow->second);
    os << ")";
    return;
  }
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TVar>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, TFunArrow>) {
          os << "=>";
        } else if constexpr (std::is_same_v<T, TForall>) {
          os << "(forall (" << n.var << " ";
          print_kind(os, n.kind);
          os << ") ";
          print_type(os, n.body);
          os << ")";
        } else if constexpr (std::is_same_v<T, TApp>) {
          // flatten the application spine
          std::vector<TypePtr> args;
          TypePtr head = t;
          while (auto* app = std::get_if<TApp>(&head->node)) {
            args.push_back(app->arg);
            head = app->fun;
          }
          os << "(";
          print_type(os, head);
          for (auto it = args.rbegin(); it != args.rend(); ++it) {
            os << " ";
            print_type(os, *it);
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, TPrim>) {
          os << prim_type_name(n.prim);
        } else if constexpr (std::is_same_v<T, TNamed>) {
          os << n.ref.str();
        }
      },
      t->node);
}

void print_expr(std::ostream& os, const ExprPtr& e);

void print_lit(std::ostream& os, const Literal& lit) {
  switch (lit.tag) {
    case Literal::Tag::Unit: os << "unit"; break;
    case Literal::Tag::Bool: os << (lit.b ? "true" : "false"); break;
    case Literal::Tag::Int64: os << lit.i; break;
    case Literal::Tag::Decimal: os << decimal_to_string(lit.dec); break;
    case Literal::Tag::Text: os << quote_text(lit.text); break;
    case Literal::Tag::Date: os << render_date(lit.i); break;
    case Literal::Tag::Timestamp: os << render_timestamp(lit.i); break;
  }
}

void print_pattern(std::ostream& os, const CasePattern& p) {
  switch (p.tag) {
    case CasePattern::Tag::Default: os << "_"; break;
    case CasePattern::Tag::BoolTrue: os << "true"; break;
    case CasePattern::Tag::BoolFalse: os << "false"; break;
    case CasePattern::Tag::Nil: os << "nil"; break;
    case CasePattern::Tag::Cons:
      os << "(cons " << p.bind1 << " " << p.bind2 << ")";
      break;
    case CasePattern::Tag::Variant:
      os << "(" << p.variant << " " << p.bind1 << ")";
      break;
  }
}

void print_expr(std::ostream& os, const ExprPtr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EVar>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, ELam>) {
          os << "(lam (" << n.var << " ";
          print_type(os, n.annot);
          os << ") ";
          print_expr(os, n.body);
          os << ")";
        } else if constexpr (std::is_same_v<T, EApp> ||
                             std::is_same_v<T, ETyApp>) {
          // flatten mixed term/type application spine
          struct Arg { ExprPtr e; TypePtr t; };
          std::vector<Arg> args;
          ExprPtr head = e;
          for (;;) {
            if (auto* app = std::get_if<EApp>(&head->node)) {
              args.push_back({app->arg, nullptr});
              head = app->fun;
            } else if (auto* tapp = std::get_if<ETyApp>(&head->node)) {
              args.push_back({nullptr, tapp->arg});
              head = tapp->fun;
            } else {
              break;
            }
          }
          os << "(";
          print_expr(os, head);
          for (auto it = args.rbegin(); it != args.rend(); ++it) {
            os << " ";
            if (it->e) {
              print_expr(os, it->e);
            } else {
              os << "@ ";
              print_type(os, it->t);
            }
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, ETyLam>) {
          os << "(tylam (" << n.var << " ";
          print_kind(os, n.kind);
          os << ") ";
          print_expr(os, n.body);
          os << ")";
        } else if constexpr (std::is_same_v<T, ELit>) {
          print_lit(os, n.lit);
        } else if constexpr (std::is_same_v<T, EParty>) {
          os << "(party " << n.party << ")";
        } else if constexpr (std::is_same_v<T, EBuiltin>) {
          os << "(" << n.name;
          for (const auto& t : n.type_args) {
            os << " @ ";
            print_type(os, t);
          }
          for (const auto& a : n.args) {
            os << " ";
            print_expr(os, a);
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, ERecCon>) {
          os << "(rec " << n.ref.str();
          for (const auto& t : n.type_args) {
            os << " @ ";
            print_type(os, t);
          }
          for (const auto& [f, v] : n.fields) {
            os << " (" << f << " ";
            print_expr(os, v);
            os << ")";
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, ERecProj>) {
          os << "(proj " << n.ref.str() << " " << n.field << " ";
          print_expr(os, n.arg);
          os << ")";
        } else if constexpr (std::is_same_v<T, ERecUpd>) {
          os << "(upd " << n.ref.str() << " " << n.field << " ";
          print_expr(os, n.record);
          os << " ";
          print_expr(os, n.value);
          os << ")";
        } else if constexpr (std::is_same_v<T, EVarCon>) {
          os << "(con " << n.ref.str() << " " << n.variant;
          for (const auto& t : n.type_args) {
            os << " @ ";
            print_type(os, t);
          }
          os << " ";
          print_expr(os, n.arg);
          os << ")";
        } else if constexpr (std::is_same_v<T, ECase>) {
          os << "(case ";
          print_expr(os, n.scrutinee);
          for (const auto& alt : n.alts) {
            os << " (";
            print_pattern(os, alt.pat);
            os << " ";
            print_expr(os, alt.body);
            os << ")";
          }
          os << ")";
        } else if constexpr (std::is_same_v<T, EValRef>) {
          os << n.ref.str();
        } else if constexpr (std::is_same_v<T, EUpdatePure>) {
          os << "(pure @ ";
          print_type(os, n.type);
          os << " ";
          print_expr(os, n.body);
          os << ")";
        } else if constexpr (std::is_same_v<T, EUpdateBind>) {
          os << "(bind (" << n.var << " ";
          print_type(os, n.type);
          os << " ";
          print_expr(os, n.bound);
          os << ") ";
          print_expr(os, n.body);
          os << ")";
        } else if constexpr (std::is_same_v<T, EUpdateCreate>) {
          os << "(create @ " << n.template_ref.str() << " ";
          print_expr(os, n.arg);
          os << ")";
        } else if constexpr (std::is_same_v<T, EUpdateFetch>) {
          os << "(fetch @ " << n.template_ref.str() << " ";
          print_expr(os, n.cid);
          os << ")";
        } else if constexpr (std::is_same_v<T, EUpdateExercise>) {
          os << "(exercise @ " << n.template_ref.str() << " " << n.choice << " ";
          print_expr(os, n.cid);
          os << " ";
          print_expr(os, n.arg);
          os << ")";
        } else if constexpr (std::is_same_v<T, ECidLeq>) {
          os << "(cid_le @ ";
          print_type(os, n.type_arg);
          os << " ";
          print_expr(os, n.lhs);
          os << " ";
          print_expr(os, n.rhs);
          os << ")";
        }
      },
      e->node);
}

void print_type_params(std::ostream& os, const std::vector<TypeParam>& ps) {
  os << "(";
  bool first = true;
  for (const auto& p : ps) {
    if (!first) os << " ";
    first = false;
    os << "(" << p.var << " ";
    print_kind(os, p.kind);
    os << ")";
  }
  os << ")";
}

}  // namespace

std::string pretty_type(const TypePtr& t) {
  std::ostringstream os;
  print_type(os, t);
  return os.str();
}

std::string type_to_string(const TypePtr& t) { return pretty_type(t); }

std::string pretty_expr(const ExprPtr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string pretty_package(const Package& pkg) {
  Package sorted = pkg;
  canonicalize(sorted);
  std::ostringstream os;
  for (const auto& m : sorted.modules) {
    os << "(module " << m.name << "\n";
    for (const auto& r : m.records) {
      os << "  (record " << r.name << " ";
      print_type_params(os, r.params);
      for (const auto& [f, t] : r.fields) {
        os << " (" << f << " ";
        print_type(os, t);
        os << ")";
      }
      os << ")\n";
    }
    for (const auto& v : m.variants) {
      os << "  (variant " << v.name << " ";
      print_type_params(os, v.params);
      for (const auto& [c, t] : v.constructors) {
        os << " (" << c << " ";
        print_type(os, t);
        os << ")";
      }
      os << ")\n";
    }
    for (const auto& v : m.values) {
      os << "  (value " << v.name << " ";
      print_type(os, v.type);
      os << " ";
      print_expr(os, v.body);
      os << ")\n";
    }
    for (const auto& t : m.templates) {
      os << "  (template " << t.name << " " << t.param_var << "\n";
      os << "    (ensure ";
      print_expr(os, t.ensure);
      os << ")\n    (signatories ";
      print_expr(os, t.signatories);
      os << ")\n    (observers ";
      print_expr(os, t.observers);
      os << ")";
      for (const auto& c : t.choices) {
        if (c.name == kArchiveChoiceName) continue;  // implicit
        os << "\n    (choice " << c.name << " "
           << (c.kind == ChoiceKind::Consuming ? "consuming" : "nonconsuming")
           << " (" << c.arg_var << " ";
        print_type(os, c.arg_type);
        os << ") ";
        print_type(os, c.result_type);
        os << "\n      (controllers ";
        print_expr(os, c.controllers);
        os << ")\n      (choice-observers ";
        print_expr(os, c.choice_observers);
        os << ")\n      (body ";
        print_expr(os, c.body);
        os << "))";
      }
      os << ")\n";
    }
    os << ")\n";
  }
  return os.str();
}

}  // namespace lf
