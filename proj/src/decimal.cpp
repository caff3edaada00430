#include "lf/decimal.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace lf {

namespace mp = boost::multiprecision;
using int256 = mp::int256_t;

__int128 decimal_scale() {
  __int128 s = 1;
  for (int i = 0; i < kDecimalScaleDigits; ++i) s *= 10;
  return s;
}

__int128 decimal_bound() {
  __int128 b = 1;
  for (int i = 0; i < 38; ++i) b *= 10;
  return b;
}

namespace {

int256 to256(__int128 v) { return int256(v); }

std::optional<DecimalLit> clamp(const int256& v) {
  int256 bound = to256(decimal_bound());
  if (v >= bound || v <= -bound) return std::nullopt;
  DecimalLit d;
  d.scaled = static_cast<__int128>(v);
  return d;
}

// round-half-even division of num by den (den > 0)
int256 div_half_even(const int256& num, const int256& den) {
  int256 q = num / den;
  int256 r = num % den;
  if (r == 0) return q;
  int256 twice = mp::abs(r) * 2;
  bool round_away;
  if (twice > den)
    round_away = true;
  else if (twice < den)
    round_away = false;
  else
    round_away = (q % 2) != 0;  // ties to even
  if (round_away) q += (num < 0) == (den < 0) ? 1 : -1;
  return q;
}

}  // namespace

std::optional<DecimalLit> decimal_from_string(const std::string& s) {
  size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = s[pos] == '-';
    ++pos;
  }
  size_t dot = s.find('.', pos);
  if (dot == std::string::npos || dot == pos || dot + 1 >= s.size())
    return std::nullopt;
  std::string intpart = s.substr(pos, dot - pos);
  std::string fracpart = s.substr(dot + 1);
  if (fracpart.size() > kDecimalScaleDigits) return std::nullopt;
  for (char c : intpart)
    if (!isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  for (char c : fracpart)
    if (!isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  int256 v = 0;
  for (char c : intpart) v = v * 10 + (c - '0');
  for (char c : fracpart) v = v * 10 + (c - '0');
  for (size_t i = fracpart.size(); i < kDecimalScaleDigits; ++i) v *= 10;
  if (neg) v = -v;
  return clamp(v);
}

std::string decimal_to_string(const DecimalLit& d) {
  __int128 v = d.scaled;
  bool neg = v < 0;
  if (neg) v = -v;
  __int128 scale = decimal_scale();
  __int128 ip = v / scale;
  __int128 fp = v % scale;
  std::string ints;
  if (ip == 0) ints = "0";
  while (ip > 0) {
    ints.insert(ints.begin(), static_cast<char>('0' + static_cast<int>(ip % 10)));
    ip /= 10;
  }
  std::string frac(kDecimalScaleDigits, '0');
  for (int i = kDecimalScaleDigits - 1; i >= 0; --i) {
    frac[i] = static_cast<char>('0' + static_cast<int>(fp % 10));
    fp /= 10;
  }
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return (neg ? "-" : "") + ints + "." + frac;
}

std::optional<DecimalLit> decimal_add(DecimalLit a, DecimalLit b) {
  return clamp(to256(a.scaled) + to256(b.scaled));
}
std::optional<DecimalLit> decimal_sub(DecimalLit a, DecimalLit b) {
  return clamp(to256(a.scaled) - to256(b.scaled));
}
std::optional<DecimalLit> decimal_mul(DecimalLit a, DecimalLit b) {
  int256 prod = to256(a.scaled) * to256(b.scaled);
  return clamp(div_half_even(prod, to256(decimal_scale())));
}
std::optional<DecimalLit> decimal_div(DecimalLit a, DecimalLit b) {
  if (b.scaled == 0) return std::nullopt;
  int256 num = to256(a.scaled) * to256(decimal_scale());
  int256 den = to256(b.scaled);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return clamp(div_half_even(num, den));
}

}  // namespace lf
