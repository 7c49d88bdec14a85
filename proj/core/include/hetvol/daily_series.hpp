#pragma once

#include "hetvol/date.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hetvol {

/// One value per consecutive calendar day, starting at `start()`.
///
/// Missing days hold a quiet NaN sentinel that no computation reads; query
/// `missing(i)` before using `value(i)`. Non-missing values are always finite.
class DailySeries {
public:
    /// Placeholder: a single missing day at 1970-01-01.
    DailySeries();
    DailySeries(Date start, std::vector<double> values);
    DailySeries(Date start, std::vector<double> values, std::vector<bool> missing);

    /// All-missing series of the given length.
    static DailySeries empty_like(Date start, std::size_t n);

    [[nodiscard]] Date start() const noexcept { return start_; }
    [[nodiscard]] Date end() const noexcept { return add_days(start_, static_cast<long>(values_.size()) - 1); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] Date date(std::size_t i) const noexcept { return add_days(start_, static_cast<long>(i)); }

    [[nodiscard]] double value(std::size_t i) const { return values_.at(i); }
    [[nodiscard]] bool missing(std::size_t i) const { return missing_.at(i); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<bool>& missing_mask() const noexcept { return missing_; }

    [[nodiscard]] std::size_t count_present() const noexcept;
    [[nodiscard]] bool complete() const noexcept { return count_present() == size(); }

    /// Index of `d` if it falls inside the series span.
    [[nodiscard]] std::optional<std::size_t> index_of(Date d) const noexcept;

    /// Values of non-missing days, in order.
    [[nodiscard]] std::vector<double> present_values() const;

    /// Sub-series over [first, first + count).
    [[nodiscard]] DailySeries slice(std::size_t first, std::size_t count) const;

    /// Sub-series over the inclusive date range, clipped to the series span.
    [[nodiscard]] DailySeries between(Date first, Date last) const;

private:
    Date start_;
    std::vector<double> values_;
    std::vector<bool> missing_;
};

/// Two series restricted to their common dates where both are present.
struct AlignedPair {
    std::vector<Date> dates;
    std::vector<double> a;
    std::vector<double> b;
};

/// Intersects the spans of `a` and `b` and keeps a day only if it is present in both.
/// Throws std::invalid_argument when the spans do not overlap.
AlignedPair align_series(const DailySeries& a, const DailySeries& b);

}  // namespace hetvol
