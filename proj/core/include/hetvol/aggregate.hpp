#pragma once

#include "hetvol/daily_series.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hetvol {

struct HourlyRecord {
    Date date;
    int hour = 0;  // 1..24
    double price = 0.0;     // EUR/MWh
    double quantity = 0.0;  // MWh
};

struct AggregationOptions {
    /// Minimum number of reported hours for a day to be aggregated; fewer flags it missing.
    int min_hours = 20;
};

struct AggregationResult {
    DailySeries series;
    std::vector<std::string> warnings;
};

/// Quantity-weighted mean of one day's hourly prices. Returns nullopt when the total
/// quantity is zero. Throws std::invalid_argument on negative quantities or length mismatch.
std::optional<double> weighted_average(std::span<const double> prices,
                                       std::span<const double> quantities);

/// Aggregates hourly records (any order, one zone) into a daily quantity-weighted price
/// series spanning the first to the last reported date. Days with too few hours or zero
/// traded quantity are flagged missing and a warning is recorded for each.
AggregationResult weighted_daily_average(std::span<const HourlyRecord> records,
                                         const AggregationOptions& options = {});

}  // namespace hetvol
