#include "hetvol/csv_io.hpp"

#include "hetvol/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hetvol {

namespace {

struct Line {
    std::size_t number = 0;
    std::string_view text;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto line = text.substr(0, nl);
        ++number;
        if (!trim(line).empty()) out.push_back({number, trim(line)});
        if (nl == std::string_view::npos) break;
        text.remove_prefix(nl + 1);
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

std::string strip_bom(std::string_view text) {
    if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
        text.remove_prefix(3);
    }
    return std::string(text);
}

void check_header(const std::vector<Line>& lines, const std::vector<std::string>& expected,
                  const std::string& source) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
    if (lines.empty()) throw InputError(source + ": empty file, expected header '" + want + "'");
    const auto fields = split_fields(lines.front().text);
    bool ok = fields.size() == expected.size();
    for (std::size_t i = 0; ok && i < fields.size(); ++i) ok = fields[i] == expected[i];
    if (!ok) {
        throw InputError(source + ": row " + std::to_string(lines.front().number) +
                         ": header must be '" + want + "', found '" + std::string(lines.front().text) + "'");
    }
}

double parse_number(std::string_view field, const std::string& source, std::size_t row,
                    const std::string& column) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw InputError(source, row, column, "not a finite number: '" + std::string(field) + "'");
    }
    return v;
}

Date parse_date_field(std::string_view field, const std::string& source, std::size_t row,
                      const std::string& column) {
    try {
        return parse_date(field);
    } catch (const InputError& e) {
        throw InputError(source, row, column, e.what());
    }
}

}  // namespace

HourlyByZone parse_hourly_csv(std::string_view raw, const std::string& source) {
    const std::string text = strip_bom(raw);
    const auto lines = split_lines(text);
    const std::vector<std::string> header{"date", "hour", "zone", "price_eur_mwh", "quantity_mwh"};
    check_header(lines, header, source);
    HourlyByZone out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = lines[i].number;
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != header.size()) {
            throw InputError(source + ": row " + std::to_string(row) + ": expected " +
                             std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
        }
        HourlyRecord rec;
        rec.date = parse_date_field(fields[0], source, row, "date");
        int hour = 0;
        const auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), hour);
        if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size() || hour < 1 || hour > 24) {
            throw InputError(source, row, "hour", "expected an integer in 1..24, found '" + std::string(fields[1]) + "'");
        }
        rec.hour = hour;
        if (fields[2].empty()) throw InputError(source, row, "zone", "empty zone identifier");
        rec.price = parse_number(fields[3], source, row, "price_eur_mwh");
        rec.quantity = parse_number(fields[4], source, row, "quantity_mwh");
        if (rec.quantity < 0.0) throw InputError(source, row, "quantity_mwh", "negative quantity");
        out[std::string(fields[2])].push_back(rec);
    }
    return out;
}

HourlyByZone read_hourly_csv(const std::filesystem::path& path) {
    return parse_hourly_csv(read_text_file(path), path.string());
}

DailySeries parse_daily_csv(std::string_view raw, const std::string& source) {
    const std::string text = strip_bom(raw);
    const auto lines = split_lines(text);
    check_header(lines, {"date", "value"}, source);
    if (lines.size() < 2) throw InputError(source + ": no data rows");
    std::vector<double> values;
    std::vector<bool> missing;
    Date start{};
    Date prev{};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto row = lines[i].number;
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 2) {
            throw InputError(source + ": row " + std::to_string(row) + ": expected 2 fields, found " +
                             std::to_string(fields.size()));
        }
        const Date d = parse_date_field(fields[0], source, row, "date");
        if (i == 1) {
            start = d;
        } else {
            const long gap = days_between(prev, d);
            if (gap <= 0) throw InputError(source, row, "date", "dates must be strictly increasing");
            for (long k = 1; k < gap; ++k) {
                values.push_back(std::numeric_limits<double>::quiet_NaN());
                missing.push_back(true);
            }
        }
        prev = d;
        const bool empty = fields[1].empty() || fields[1] == "NA" || fields[1] == "NaN";
        values.push_back(empty ? std::numeric_limits<double>::quiet_NaN()
                               : parse_number(fields[1], source, row, "value"));
        missing.push_back(empty);
    }
    return DailySeries(start, std::move(values), std::move(missing));
}

DailySeries read_daily_csv(const std::filesystem::path& path) {
    return parse_daily_csv(read_text_file(path), path.string());
}

std::set<Date> parse_holidays(std::string_view raw, const std::string& source) {
    const std::string text = strip_bom(raw);
    std::set<Date> out;
    for (const auto& line : split_lines(text)) {
        auto body = line.text.substr(0, line.text.find('#'));
        body = trim(body);
        if (body.empty()) continue;
        out.insert(parse_date_field(body, source, line.number, "date"));
    }
    return out;
}

std::set<Date> read_holidays(const std::filesystem::path& path) {
    return parse_holidays(read_text_file(path), path.string());
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    return fmt::format("{}", v);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("CsvWriter: empty header");
    row(header);
}

CsvWriter& CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_) {
        throw std::invalid_argument("CsvWriter: expected " + std::to_string(columns_) + " fields");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) text_ += ',';
        text_ += fields[i];
    }
    text_ += '\n';
    return *this;
}

void CsvWriter::save(const std::filesystem::path& path) const {
    write_text_file(path, text_);
}

void write_daily_csv(const std::filesystem::path& path, const DailySeries& series,
                     const std::string& value_column) {
    CsvWriter w({"date", value_column});
    for (std::size_t i = 0; i < series.size(); ++i) {
        w.row({format_date(series.date(i)), series.missing(i) ? "" : format_number(series.value(i))});
    }
    w.save(path);
}

void write_holidays(const std::filesystem::path& path, const std::set<Date>& holidays) {
    std::string text = "# bank holidays, one ISO date per line\n";
    for (const auto d : holidays) text += format_date(d) + '\n';
    write_text_file(path, text);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hetvol
