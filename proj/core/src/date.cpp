#include "hetvol/date.hpp"

#include "hetvol/errors.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace hetvol {

namespace {

int parse_int(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw InputError("invalid date '" + std::string(whole) + "', expected YYYY-MM-DD");
    }
    return value;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw InputError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    const int y = parse_int(text.substr(0, 4), text);
    const int m = parse_int(text.substr(5, 2), text);
    const int d = parse_int(text.substr(8, 2), text);
    const std::chrono::year_month_day ymd{std::chrono::year{y},
                                          std::chrono::month{static_cast<unsigned>(m)},
                                          std::chrono::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) {
        throw InputError("invalid calendar date '" + std::string(text) + "'");
    }
    return Date{ymd};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date make_date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date");
    }
    return Date{ymd};
}

int iso_weekday(Date d) {
    return static_cast<int>(std::chrono::weekday{d}.iso_encoding());
}

int year_of(Date d) {
    return static_cast<int>(std::chrono::year_month_day{d}.year());
}

int day_of_year_365(Date d) {
    const std::chrono::year_month_day ymd{d};
    const Date jan1{ymd.year() / std::chrono::January / 1};
    const int doy = static_cast<int>(days_between(jan1, d)) + 1;
    if (ymd.year().is_leap() && doy > 60) {
        return doy - 1;
    }
    return doy;
}

}  // namespace hetvol
