#pragma once

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skyglyphs {

/// Calendar day. Ordering and differences go through sys_days.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}
    constexpr Date(int year, unsigned month, unsigned day)
        : days_(std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{month},
                                            std::chrono::day{day}}) {}

    /// Accepts `YYYY-MM-DD`, optionally followed by a `T...` time part that is ignored.
    static Date parse(std::string_view text) {
        if (text.size() < 10 || text[4] != '-' || text[7] != '-' ||
            (text.size() > 10 && text[10] != 'T' && text[10] != ' ')) {
            throw std::invalid_argument("invalid ISO-8601 date: '" + std::string(text) + "'");
        }
        auto digits = [&](std::size_t pos, std::size_t len) {
            int value = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                if (text[i] < '0' || text[i] > '9') {
                    throw std::invalid_argument("invalid ISO-8601 date: '" + std::string(text) + "'");
                }
                value = value * 10 + (text[i] - '0');
            }
            return value;
        };
        std::chrono::year_month_day ymd{std::chrono::year{digits(0, 4)},
                                        std::chrono::month{static_cast<unsigned>(digits(5, 2))},
                                        std::chrono::day{static_cast<unsigned>(digits(8, 2))}};
        if (!ymd.ok()) {
            throw std::invalid_argument("invalid calendar date: '" + std::string(text) + "'");
        }
        return Date{std::chrono::sys_days{ymd}};
    }

    [[nodiscard]] std::string iso() const {
        std::chrono::year_month_day ymd{days_};
        char buf[16];
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    [[nodiscard]] constexpr std::chrono::sys_days days() const { return days_; }

    /// Signed day count `*this - other`.
    [[nodiscard]] constexpr long days_since(const Date& other) const {
        return static_cast<long>((days_ - other.days_).count());
    }

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

}  // namespace skyglyphs
