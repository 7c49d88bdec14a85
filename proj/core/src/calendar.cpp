#include "hetvol/calendar.hpp"

#include <stdexcept>

namespace hetvol {

CalendarDesign build_calendar(Date start, std::size_t n_days, const std::set<Date>& holidays) {
    if (n_days == 0) {
        throw std::invalid_argument("build_calendar: n_days must be at least 1");
    }
    CalendarDesign cal;
    cal.start = start;
    cal.trend.reserve(n_days);
    cal.dayyear.reserve(n_days);
    cal.dayweek.reserve(n_days);
    cal.bank.reserve(n_days);
    for (std::size_t i = 0; i < n_days; ++i) {
        const Date d = add_days(start, static_cast<long>(i));
        cal.trend.push_back(static_cast<int>(i) + 1);
        cal.dayyear.push_back(day_of_year_365(d));
        cal.dayweek.push_back(iso_weekday(d));
        cal.bank.push_back(holidays.contains(d) ? 1 : 0);
    }
    return cal;
}

Date easter_sunday(int year) {
    // Anonymous Gregorian algorithm (Meeus/Jones/Butcher).
    const int a = year % 19;
    const int b = year / 100;
    const int c = year % 100;
    const int d = b / 4;
    const int e = b % 4;
    const int f = (b + 8) / 25;
    const int g = (b - f + 1) / 3;
    const int h = (19 * a + b - d - g + 15) % 30;
    const int i = c / 4;
    const int k = c % 4;
    const int l = (32 + 2 * e + 2 * i - h - k) % 7;
    const int m = (a + 11 * h + 22 * l) / 451;
    const int month = (h + l - 7 * m + 114) / 31;
    const int day = ((h + l - 7 * m + 114) % 31) + 1;
    return make_date(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

std::set<Date> italian_holidays(int first_year, int last_year) {
    static constexpr std::pair<unsigned, unsigned> fixed[] = {
        {1, 1}, {1, 6}, {4, 25}, {5, 1}, {6, 2}, {8, 15}, {11, 1}, {12, 8}, {12, 25}, {12, 26}};
    std::set<Date> out;
    for (int y = first_year; y <= last_year; ++y) {
        for (const auto& [m, d] : fixed) {
            out.insert(make_date(y, m, d));
        }
        out.insert(add_days(easter_sunday(y), 1));
    }
    return out;
}

}  // namespace hetvol
