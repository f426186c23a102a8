#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace hfo {

// UTC instant at one-second resolution.
using Timestamp = std::chrono::sys_seconds;
using Days = std::chrono::days;

inline constexpr Timestamp from_epoch(long long seconds) {
  return Timestamp{std::chrono::seconds{seconds}};
}
inline constexpr long long to_epoch(Timestamp t) { return t.time_since_epoch().count(); }

/// "2020-10-01T15:30:00Z"
std::string format_iso(Timestamp t);
/// "2020-10-01 15:30:00"
std::string format_plain(Timestamp t);
/// Strict inverse of format_iso; nullopt on any deviation from the layout.
std::optional<Timestamp> parse_iso(std::string_view text);

std::chrono::sys_days day_of(Timestamp t);
std::chrono::year_month month_of(Timestamp t);
/// "2020-05"
std::string format_month(std::chrono::year_month ym);
/// "2020-05-17"
std::string format_day(std::chrono::sys_days d);
std::optional<std::chrono::year_month> parse_month(std::string_view text);

}  // namespace hfo
