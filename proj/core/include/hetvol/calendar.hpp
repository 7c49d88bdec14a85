#pragma once

#include "hetvol/date.hpp"

#include <cstddef>
#include <set>
#include <vector>

namespace hetvol {

/// Per-day calendar covariates for the additive mean and variance models.
///
/// Conventions: `trend` runs 1..n; `dayweek` is the ISO weekday (Monday = 1);
/// `dayyear` cycles 1..365 with Feb 29 coded 60 (see day_of_year_365);
/// `bank` is 1 on listed holidays.
struct CalendarDesign {
    Date start;
    std::vector<int> trend;
    std::vector<int> dayyear;
    std::vector<int> dayweek;
    std::vector<int> bank;

    [[nodiscard]] std::size_t size() const noexcept { return trend.size(); }
};

CalendarDesign build_calendar(Date start, std::size_t n_days, const std::set<Date>& holidays);

/// Italian national public holidays for the inclusive year range, including Easter Monday.
/// This is the default bank-holiday table; callers can supply their own.
std::set<Date> italian_holidays(int first_year, int last_year);

/// Gregorian Easter Sunday.
Date easter_sunday(int year);

}  // namespace hetvol
