#include "hfo/time.hpp"

#include <charconv>
#include <cstdio>

namespace hfo {

using namespace std::chrono;

namespace {

struct Civil {
  int year;
  unsigned month, day;
  long long hour, minute, second;
};

Civil split(Timestamp t) {
  const sys_days d = floor<days>(t);
  const year_month_day ymd{d};
  const auto rem = (t - d).count();
  return {static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
          static_cast<unsigned>(ymd.day()), rem / 3600, (rem / 60) % 60, rem % 60};
}

template <typename T>
bool digits(std::string_view s, std::size_t pos, std::size_t len, T& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return res.ec == std::errc{};
}

}  // namespace

std::string format_iso(Timestamp t) {
  const Civil c = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::string format_plain(Timestamp t) {
  const Civil c = split(t);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02lld:%02lld:%02lld", c.year, c.month, c.day,
                c.hour, c.minute, c.second);
  return buf;
}

std::optional<Timestamp> parse_iso(std::string_view s) {
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':' || s[19] != 'Z')
    return std::nullopt;
  int y = 0;
  unsigned mo = 0, d = 0;
  int h = 0, mi = 0, se = 0;
  if (!digits(s, 0, 4, y) || !digits(s, 5, 2, mo) || !digits(s, 8, 2, d) ||
      !digits(s, 11, 2, h) || !digits(s, 14, 2, mi) || !digits(s, 17, 2, se))
    return std::nullopt;
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || se > 59) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se};
}

sys_days day_of(Timestamp t) { return floor<days>(t); }

year_month month_of(Timestamp t) {
  const year_month_day ymd{day_of(t)};
  return ymd.year() / ymd.month();
}

std::string format_month(year_month ym) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ym.year()),
                static_cast<unsigned>(ym.month()));
  return buf;
}

std::string format_day(sys_days d) {
  const year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<year_month> parse_month(std::string_view s) {
  int y = 0;
  unsigned m = 0;
  if (s.size() != 7 || s[4] != '-' || !digits(s, 0, 4, y) || !digits(s, 5, 2, m))
    return std::nullopt;
  const year_month ym{year{y}, month{m}};
  if (!ym.ok()) return std::nullopt;
  return ym;
}

}  // namespace hfo
