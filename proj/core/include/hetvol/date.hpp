#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace hetvol {

/// Calendar day. Arithmetic in whole days via std::chrono::days.
using Date = std::chrono::sys_days;

/// Parses `YYYY-MM-DD`. Throws InputError on malformed or impossible dates.
Date parse_date(std::string_view text);

std::string format_date(Date d);

Date make_date(int year, unsigned month, unsigned day);

/// Signed number of days from `from` to `to`.
inline long days_between(Date from, Date to) {
    return static_cast<long>((to - from).count());
}

inline Date add_days(Date d, long n) {
    return d + std::chrono::days{n};
}

/// ISO weekday: Monday = 1 ... Sunday = 7.
int iso_weekday(Date d);

/// Day of year on a fixed 365-day cycle. In leap years Feb 29 takes code 60
/// and every later day is shifted down by one, so Dec 31 is always 365.
int day_of_year_365(Date d);

int year_of(Date d);

}  // namespace hetvol
