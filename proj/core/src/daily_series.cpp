#include "hetvol/daily_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetvol {

namespace {
constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
}

DailySeries::DailySeries() : DailySeries(Date{}, {kMissing}, {true}) {}

DailySeries::DailySeries(Date start, std::vector<double> values)
    : DailySeries(start, std::move(values), {}) {}

DailySeries::DailySeries(Date start, std::vector<double> values, std::vector<bool> missing)
    : start_(start), values_(std::move(values)), missing_(std::move(missing)) {
    if (values_.empty()) {
        throw std::invalid_argument("DailySeries requires at least one value");
    }
    if (missing_.empty()) {
        missing_.assign(values_.size(), false);
    }
    if (missing_.size() != values_.size()) {
        throw std::invalid_argument("DailySeries missing mask length differs from values");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (missing_[i]) {
            values_[i] = kMissing;
        } else if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("DailySeries value at " + format_date(date(i)) +
                                        " is not finite and not flagged missing");
        }
    }
}

DailySeries DailySeries::empty_like(Date start, std::size_t n) {
    return DailySeries(start, std::vector<double>(n, kMissing), std::vector<bool>(n, true));
}

std::size_t DailySeries::count_present() const noexcept {
    return static_cast<std::size_t>(std::count(missing_.begin(), missing_.end(), false));
}

std::optional<std::size_t> DailySeries::index_of(Date d) const noexcept {
    const long offset = days_between(start_, d);
    if (offset < 0 || static_cast<std::size_t>(offset) >= values_.size()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(offset);
}

std::vector<double> DailySeries::present_values() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!missing_[i]) out.push_back(values_[i]);
    }
    return out;
}

DailySeries DailySeries::slice(std::size_t first, std::size_t count) const {
    if (count == 0 || first + count > values_.size()) {
        throw std::out_of_range("DailySeries::slice out of range");
    }
    std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first),
                          values_.begin() + static_cast<std::ptrdiff_t>(first + count));
    std::vector<bool> m(missing_.begin() + static_cast<std::ptrdiff_t>(first),
                        missing_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return DailySeries(date(first), std::move(v), std::move(m));
}

DailySeries DailySeries::between(Date first, Date last) const {
    const Date lo = std::max(first, start_);
    const Date hi = std::min(last, end());
    if (hi < lo) {
        throw std::invalid_argument("date range " + format_date(first) + ".." + format_date(last) +
                                    " does not overlap the series");
    }
    return slice(static_cast<std::size_t>(days_between(start_, lo)),
                 static_cast<std::size_t>(days_between(lo, hi)) + 1);
}

AlignedPair align_series(const DailySeries& a, const DailySeries& b) {
    const Date lo = std::max(a.start(), b.start());
    const Date hi = std::min(a.end(), b.end());
    if (hi < lo) {
        throw std::invalid_argument("align_series: series do not overlap");
    }
    AlignedPair out;
    for (Date d = lo; d <= hi; d = add_days(d, 1)) {
        const std::size_t ia = *a.index_of(d);
        const std::size_t ib = *b.index_of(d);
        if (a.missing(ia) || b.missing(ib)) continue;
        out.dates.push_back(d);
        out.a.push_back(a.value(ia));
        out.b.push_back(b.value(ib));
    }
    return out;
}

}  // namespace hetvol
