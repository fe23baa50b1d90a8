#include "kycvar/date.hpp"

#include <cstdio>

#include "kycvar/errors.hpp"
#include "kycvar/text.hpp"

namespace kycvar {

using namespace std::chrono;

Date::Date(int y, unsigned m, unsigned d) {
  const year_month_day ymd{year{y}, month{m}, day{d}};
  if (!ymd.ok()) throw DomainError("invalid calendar date", "date");
  days_ = sys_days{ymd};
}

Date Date::parse(std::string_view iso) {
  iso = text::trim(iso);
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw ParseError("date '" + std::string(iso) + "' is not YYYY-MM-DD", "date");
  }
  try {
    const auto y = text::to_int(iso.substr(0, 4), "date");
    const auto m = text::to_int(iso.substr(5, 2), "date");
    const auto d = text::to_int(iso.substr(8, 2), "date");
    const year_month_day ymd{year{static_cast<int>(y)}, month{static_cast<unsigned>(m)},
                             day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("", "date");
    return Date(sys_days{ymd});
  } catch (const ParseError&) {
    throw ParseError("date '" + std::string(iso) + "' is not a valid calendar date", "date");
  }
}

std::string Date::iso() const {
  const year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

bool Date::weekend() const noexcept {
  const weekday wd{days_};
  return wd == Saturday || wd == Sunday;
}

Date Date::next_weekday() const noexcept {
  Date d(days_ + std::chrono::days{1});
  while (d.weekend()) d = Date(d.days_ + std::chrono::days{1});
  return d;
}

}  // namespace kycvar
