#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace lf {

// Date: days since 1970-01-01. Timestamp: microseconds since epoch, UTC.

std::optional<std::int64_t> parse_date(const std::string& s);       // YYYY-MM-DD
std::optional<std::int64_t> parse_timestamp(const std::string& s);  // RFC-3339 UTC

std::string render_date(std::int64_t days);
std::string render_timestamp(std::int64_t micros);

}  // namespace lf
