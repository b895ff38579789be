#include "ansc/common.hpp"

#include <charconv>
#include <cstdio>

namespace ansc {

namespace {

using namespace std::chrono;

int parse_digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view what) {
  if (pos + count > text.size()) {
    throw ParseError("truncated timestamp '" + std::string(text) + "' at " + std::string(what));
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    char c = text[i];
    if (c < '0' || c > '9') {
      throw ParseError("invalid " + std::string(what) + " in '" + std::string(text) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
}

}  // namespace

std::string format_rfc3339(Timestamp t) {
  auto day = floor<days>(t);
  year_month_day ymd{day};
  hh_mm_ss<seconds> hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

Timestamp parse_rfc3339(std::string_view text) {
  int y = parse_digits(text, 0, 4, "year");
  expect_char(text, 4, '-');
  int mo = parse_digits(text, 5, 2, "month");
  expect_char(text, 7, '-');
  int d = parse_digits(text, 8, 2, "day");
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    throw ParseError("malformed timestamp '" + std::string(text) + "'");
  }
  int h = parse_digits(text, 11, 2, "hour");
  expect_char(text, 13, ':');
  int mi = parse_digits(text, 14, 2, "minute");
  expect_char(text, 16, ':');
  int s = parse_digits(text, 17, 2, "second");
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  if (pos >= text.size()) throw ParseError("timestamp '" + std::string(text) + "' lacks a UTC offset");
  int offset_minutes = 0;
  char zone = text[pos];
  if (zone == 'Z' || zone == 'z') {
    ++pos;
  } else if (zone == '+' || zone == '-') {
    int oh = parse_digits(text, pos + 1, 2, "offset hour");
    expect_char(text, pos + 3, ':');
    int om = parse_digits(text, pos + 4, 2, "offset minute");
    offset_minutes = (oh * 60 + om) * (zone == '-' ? -1 : 1);
    pos += 6;
  } else {
    throw ParseError("malformed UTC offset in '" + std::string(text) + "'");
  }
  if (pos != text.size()) throw ParseError("trailing characters in timestamp '" + std::string(text) + "'");

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw ParseError("out-of-range field in timestamp '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

std::string format_date(sys_days d) {
  year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

sys_days parse_date(std::string_view text) {
  if (text.size() != 10) throw ParseError("malformed date '" + std::string(text) + "'");
  int y = parse_digits(text, 0, 4, "year");
  expect_char(text, 4, '-');
  int mo = parse_digits(text, 5, 2, "month");
  expect_char(text, 7, '-');
  int d = parse_digits(text, 8, 2, "day");
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ParseError("invalid date '" + std::string(text) + "'");
  return sys_days{ymd};
}

Timestamp make_timestamp(int y, unsigned m, unsigned d) {
  return sys_days{year{y} / month{m} / day{d}};
}

int calendar_year(Timestamp t) {
  return int(year_month_day{floor<days>(t)}.year());
}

}  // namespace ansc
