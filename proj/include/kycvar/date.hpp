#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace kycvar {

/// Calendar date, ISO-8601 on the wire.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::sys_days days) : days_(days) {}
  Date(int year, unsigned month, unsigned day);

  /// Throws ParseError on anything but a valid YYYY-MM-DD.
  static Date parse(std::string_view iso);

  std::string iso() const;
  std::chrono::sys_days days() const noexcept { return days_; }
  bool weekend() const noexcept;
  Date next_weekday() const noexcept;

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace kycvar
