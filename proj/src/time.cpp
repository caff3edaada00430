#include "lf/time.hpp"

#include <cctype>
#include <cstdio>

namespace lf {

namespace {

// Howard Hinnant's civil date algorithms.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool all_digits(const std::string& s, size_t from, size_t to) {
  if (to > s.size()) return false;
  for (size_t i = from; i < to; ++i)
    if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
  static const unsigned tbl[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return tbl[m - 1];
}

}  // namespace

std::optional<std::int64_t> parse_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!all_digits(s, 0, 4) || !all_digits(s, 5, 7) || !all_digits(s, 8, 10))
    return std::nullopt;
  std::int64_t y = std::stoll(s.substr(0, 4));
  unsigned m = static_cast<unsigned>(std::stoul(s.substr(5, 2)));
  unsigned d = static_cast<unsigned>(std::stoul(s.substr(8, 2)));
  if (m < 1 || m > 12 || d < 1 || d > days_in_month(y, m)) return std::nullopt;
  return days_from_civil(y, m, d);
}

std::optional<std::int64_t> parse_timestamp(const std::string& s) {
  // YYYY-MM-DDTHH:MM:SS[.ffffff]Z
  if (s.size() < 20 || s[10] != 'T' || s.back() != 'Z') return std::nullopt;
  auto days = parse_date(s.substr(0, 10));
  if (!days) return std::nullopt;
  if (s[13] != ':' || s[16] != ':') return std::nullopt;
  if (!all_digits(s, 11, 13) || !all_digits(s, 14, 16) || !all_digits(s, 17, 19))
    return std::nullopt;
  std::int64_t h = std::stoll(s.substr(11, 2));
  std::int64_t mi = std::stoll(s.substr(14, 2));
  std::int64_t se = std::stoll(s.substr(17, 2));
  if (h > 23 || mi > 59 || se > 59) return std::nullopt;
  std::int64_t micros = 0;
  size_t tail = 19;
  if (s[tail] == '.') {
    size_t end = s.size() - 1;  // before 'Z'
    size_t ndig = end - tail - 1;
    if (ndig < 1 || ndig > 6 || !all_digits(s, tail + 1, end)) return std::nullopt;
    micros = std::stoll(s.substr(tail + 1, ndig));
    for (size_t i = ndig; i < 6; ++i) micros *= 10;
    tail = end;
  }
  if (tail != s.size() - 1) return std::nullopt;
  return ((*days * 24 + h) * 60 + mi) * 60 * 1000000 + se * 1000000 + micros;
}

std::string render_date(std::int64_t days) {
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
  return buf;
}

std::string render_timestamp(std::int64_t micros) {
  std::int64_t day_micros = 86400LL * 1000000;
  std::int64_t days = micros >= 0 ? micros / day_micros
                                  : (micros - (day_micros - 1)) / day_micros;
  std::int64_t rem = micros - days * day_micros;
  std::int64_t sec = rem / 1000000;
  std::int64_t frac = rem % 1000000;
  char buf[48];
  if (frac == 0) {
    std::snprintf(buf, sizeof(buf), "%sT%02lld:%02lld:%02lldZ",
                  render_date(days).c_str(), static_cast<long long>(sec / 3600),
                  static_cast<long long>(sec / 60 % 60),
                  static_cast<long long>(sec % 60));
  } else {
    std::snprintf(buf, sizeof(buf), "%sT%02lld:%02lld:%02lld.%06lldZ",
                  render_date(days).c_str(), static_cast<long long>(sec / 3600),
                  static_cast<long long>(sec / 60 % 60),
                  static_cast<long long>(sec % 60), static_cast<long long>(frac));
  }
  return buf;
}

}  // namespace lf
