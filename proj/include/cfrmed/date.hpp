#pragma once

#include <charconv>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace cfrmed {

/// Calendar date, ISO-8601 "YYYY-MM-DD". No time-zone or arithmetic needs here.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    std::string iso() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }

    static std::optional<Date> parse(std::string_view s) {
        if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        Date d;
        auto num = [](std::string_view t, int& out) {
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
            return ec == std::errc() && p == t.data() + t.size();
        };
        if (!num(s.substr(0, 4), d.year) || !num(s.substr(5, 2), d.month) || !num(s.substr(8, 2), d.day))
            return std::nullopt;
        if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
        return d;
    }
};

} // namespace cfrmed
