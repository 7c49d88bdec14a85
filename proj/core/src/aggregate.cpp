#include "hetvol/aggregate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetvol {

std::optional<double> weighted_average(std::span<const double> prices,
                                       std::span<const double> quantities) {
    if (prices.size() != quantities.size() || prices.empty()) {
        throw std::invalid_argument("weighted_average: prices and quantities must align");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t h = 0; h < prices.size(); ++h) {
        if (quantities[h] < 0.0) {
            throw std::invalid_argument("weighted_average: negative quantity");
        }
        num += prices[h] * quantities[h];
        den += quantities[h];
    }
    if (den <= 0.0) {
        return std::nullopt;
    }
    return num / den;
}

AggregationResult weighted_daily_average(std::span<const HourlyRecord> records,
                                         const AggregationOptions& options) {
    if (records.empty()) {
        throw std::invalid_argument("weighted_daily_average: no hourly records");
    }
    const auto [lo_it, hi_it] = std::minmax_element(
        records.begin(), records.end(),
        [](const HourlyRecord& x, const HourlyRecord& y) { return x.date < y.date; });
    const Date first = lo_it->date;
    const std::size_t n = static_cast<std::size_t>(days_between(first, hi_it->date)) + 1;

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::array<double, 24>> price(n), qty(n);
    for (std::size_t i = 0; i < n; ++i) {
        price[i].fill(nan);
        qty[i].fill(nan);
    }
    for (const auto& r : records) {
        if (r.hour < 1 || r.hour > 24) {
            throw std::invalid_argument("hour " + std::to_string(r.hour) + " on " +
                                        format_date(r.date) + " outside 1..24");
        }
        if (r.quantity < 0.0) {
            throw std::invalid_argument("negative quantity on " + format_date(r.date) +
                                        " hour " + std::to_string(r.hour));
        }
        const auto i = static_cast<std::size_t>(days_between(first, r.date));
        const auto h = static_cast<std::size_t>(r.hour - 1);
        if (!std::isnan(qty[i][h])) {
            throw std::invalid_argument("duplicate record for " + format_date(r.date) + " hour " +
                                        std::to_string(r.hour));
        }
        price[i][h] = r.price;
        qty[i][h] = r.quantity;
    }

    AggregationResult out{DailySeries::empty_like(first, n), {}};
    std::vector<double> values(n, nan);
    std::vector<bool> missing(n, true);
    std::vector<double> p, q;
    for (std::size_t i = 0; i < n; ++i) {
        p.clear();
        q.clear();
        for (std::size_t h = 0; h < 24; ++h) {
            if (std::isnan(qty[i][h])) continue;
            p.push_back(price[i][h]);
            q.push_back(qty[i][h]);
        }
        const std::string day = format_date(add_days(first, static_cast<long>(i)));
        if (static_cast<int>(p.size()) < options.min_hours) {
            out.warnings.push_back(day + ": only " + std::to_string(p.size()) +
                                   " hours reported, day flagged missing");
            continue;
        }
        const auto avg = weighted_average(p, q);
        if (!avg) {
            out.warnings.push_back(day + ": zero total quantity, day flagged missing");
            continue;
        }
        values[i] = *avg;
        missing[i] = false;
    }
    out.series = DailySeries(first, std::move(values), std::move(missing));
    return out;
}

}  // namespace hetvol
