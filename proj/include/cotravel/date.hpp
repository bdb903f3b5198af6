#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cotravel {

/// Calendar date stored as whole days since 1970-01-01.
class date {
public:
    constexpr date() = default;
    constexpr explicit date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static date from_ymd(int year, unsigned month, unsigned day);

    /// Strict `YYYY-MM-DD`; rejects impossible calendar dates.
    static std::optional<date> parse_iso(std::string_view text);

    std::string to_iso() const;

    constexpr std::int32_t days() const { return days_; }

    friend constexpr auto operator<=>(date, date) = default;

    friend constexpr std::int32_t operator-(date a, date b) { return a.days_ - b.days_; }
    friend constexpr date operator+(date a, std::int32_t n) { return date(a.days_ + n); }

private:
    std::int32_t days_ = 0;
};

} // namespace cotravel
