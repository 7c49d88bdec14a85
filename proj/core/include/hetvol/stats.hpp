#pragma once

#include "hetvol/daily_series.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hetvol {

/// Trailing sample variance (divisor window - 1) over the `window` days ending at each day.
/// The first window - 1 days, and any day whose window contains a missing value, are missing.
DailySeries rolling_variance(const DailySeries& series, std::size_t window = 30);

/// Sample autocorrelations rho(0..max_lag) with divisor-n autocovariances about the
/// overall mean. Requires a complete series; throws on zero variance.
std::vector<double> acf(const DailySeries& series, std::size_t max_lag);
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

double mean(std::span<const double> x);

/// Unbiased sample variance (divisor n - 1).
double sample_variance(std::span<const double> x);

double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace hetvol
