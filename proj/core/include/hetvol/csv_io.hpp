#pragma once

#include "hetvol/aggregate.hpp"
#include "hetvol/daily_series.hpp"
#include "hetvol/date.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hetvol {

/// Hourly market records grouped by zone, as read from
/// `date,hour,zone,price_eur_mwh,quantity_mwh`.
using HourlyByZone = std::map<std::string, std::vector<HourlyRecord>>;

/// Reads the hourly price file. Throws InputError with row and column on any schema
/// violation (bad header, unparsable field, hour outside 1..24, negative quantity).
HourlyByZone read_hourly_csv(const std::filesystem::path& path);
HourlyByZone parse_hourly_csv(std::string_view text, const std::string& source = "<memory>");

/// Reads a `date,value` file. Dates must be strictly increasing; skipped dates and empty
/// values become missing days.
DailySeries read_daily_csv(const std::filesystem::path& path);
DailySeries parse_daily_csv(std::string_view text, const std::string& source = "<memory>");

/// One ISO date per line; blank lines and `#` comments ignored.
std::set<Date> read_holidays(const std::filesystem::path& path);
std::set<Date> parse_holidays(std::string_view text, const std::string& source = "<memory>");

/// Shortest round-trip decimal text with `.` separator; empty for NaN.
std::string format_number(double v);

/// Minimal CSV emitter. LF line endings, no quoting (fields never contain commas).
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    CsvWriter& row(const std::vector<std::string>& fields);
    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    void save(const std::filesystem::path& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

void write_daily_csv(const std::filesystem::path& path, const DailySeries& series,
                     const std::string& value_column = "value");
void write_holidays(const std::filesystem::path& path, const std::set<Date>& holidays);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace hetvol
