#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ansc {

using Timestamp = std::chrono::sys_seconds;

/// Integer capacity units; one unit is 1 Gbps.
using CapacityUnits = std::int64_t;

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kDaysPerYear = 365.0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept { return "error"; }
};

#define ANSC_DEFINE_ERROR(Name, tag)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    using Error::Error;                                                \
    std::string_view kind() const noexcept override { return tag; }    \
  };

// Argument outside the mathematical domain of an operation.
ANSC_DEFINE_ERROR(DomainError, "domain")
ANSC_DEFINE_ERROR(NotFoundError, "not_found")
ANSC_DEFINE_ERROR(ConfigError, "config")
ANSC_DEFINE_ERROR(ParseError, "parse")
ANSC_DEFINE_ERROR(ValidationError, "validation")
ANSC_DEFINE_ERROR(PreconditionError, "precondition")
ANSC_DEFINE_ERROR(ConflictError, "conflict")

#undef ANSC_DEFINE_ERROR

std::string format_rfc3339(Timestamp t);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)`. Fractional seconds
/// are truncated.
Timestamp parse_rfc3339(std::string_view text);

std::string format_date(std::chrono::sys_days d);
std::chrono::sys_days parse_date(std::string_view text);

Timestamp make_timestamp(int year, unsigned month, unsigned day);

inline double years_between(Timestamp from, Timestamp to) {
  return static_cast<double>((to - from).count()) / (kSecondsPerDay * kDaysPerYear);
}

inline Timestamp add_days(Timestamp t, double days) {
  return t + std::chrono::seconds{static_cast<std::int64_t>(std::llround(days * kSecondsPerDay))};
}

int calendar_year(Timestamp t);

}  // namespace ansc
