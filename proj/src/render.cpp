#include "lf/render.hpp"

#include <sstream>

namespace lf {

namespace {

void emit_party_set(std::ostringstream& os, const char* label,
                    const std::set<std::string>& s) {
  if (s.empty()) return;
  os << ' ' << label << "={";
  bool first = true;
  for (const auto& p : s) {
    if (!first) os << ',';
    os << p;
    first = false;
  }
  os << '}';
}

void render_rec(std::ostringstream& os, const ActionPtr& a, int indent) {
  os << std::string(indent, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CreateA>) {
          os << "Create #" << n.cid << ' ' << n.tmpl.str()
             << " arg=" << value_to_string(n.arg);
          emit_party_set(os, "sig", n.signatories);
          emit_party_set(os, "obs", n.observers);
          os << '\n';
        } else if constexpr (std::is_same_v<T, ExerciseA>) {
          os << "Exercise #" << n.cid << ' ' << n.tmpl.str() << '.' << n.choice
             << " arg=" << value_to_string(n.arg)
             << (n.kind == ChoiceKind::Consuming ? " consuming"
                                                 : " nonconsuming");
          emit_party_set(os, "ctl", n.controllers);
          emit_party_set(os, "sig", n.signatories);
          emit_party_set(os, "cobs", n.choice_observers);
          os << '\n';
          for (const ActionPtr& c : n.consequences)
            render_rec(os, c, indent + 2);
        } else {
          os << "Fetch #" << n.cid << ' ' << n.tmpl.str();
          emit_party_set(os, "sig", n.signatories);
          emit_party_set(os, "obs", n.observers);
          os << '\n';
        }
      },
      a->node);
}

}  // namespace

std::string render_action(const ActionPtr& a, int indent) {
  std::ostringstream os;
  render_rec(os, a, indent);
  return os.str();
}

std::string render_transaction(const Transaction& tx, int indent) {
  std::ostringstream os;
  for (const ActionPtr& a : tx) render_rec(os, a, indent);
  return os.str();
}

}  // namespace lf
