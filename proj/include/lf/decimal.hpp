#pragma once

#include <optional>
#include <string>

#include "lf/ast.hpp"

namespace lf {

// Fixed-point decimals: scaled by 10^10, at most 38 significant digits.
// Arithmetic that leaves the representable range is a runtime error,
// reported by returning nullopt.

inline constexpr int kDecimalScaleDigits = 10;

__int128 decimal_scale();             // 10^10
__int128 decimal_bound();             // 10^38 (exclusive bound on |scaled|)

std::optional<DecimalLit> decimal_from_string(const std::string& s);
std::string decimal_to_string(const DecimalLit& d);

std::optional<DecimalLit> decimal_add(DecimalLit a, DecimalLit b);
std::optional<DecimalLit> decimal_sub(DecimalLit a, DecimalLit b);
// mul/div round half-even on the 10th fractional digit
std::optional<DecimalLit> decimal_mul(DecimalLit a, DecimalLit b);
std::optional<DecimalLit> decimal_div(DecimalLit a, DecimalLit b);

}  // namespace lf
