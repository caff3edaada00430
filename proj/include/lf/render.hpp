#pragma once

#include <string>

#include "lf/interpreter.hpp"

namespace lf {

// Fixed text form of a transaction tree: one action per line, consequences
// indented two spaces, party sets sorted, empty sets omitted, e.g.
//   Exercise #1 Iou:SimpleIou.SimpleTransfer arg=Bob consuming ctl={Alice} sig={Bank}
//     Create #2 Iou:SimpleIou arg=(SimpleIou ...) sig={Bank} obs={Bob}
std::string render_action(const ActionPtr& a, int indent = 0);
std::string render_transaction(const Transaction& tx, int indent = 0);

}  // namespace lf
