#include "hetvol/config.hpp"

#include "hetvol/csv_io.hpp"
#include "hetvol/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <functional>
#include <map>

namespace hetvol {

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::map<std::string, Entry> parse_key_values(std::string_view text, const std::string& source) {
    std::map<std::string, Entry> out;
    std::size_t number = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(source + ": line " + std::to_string(number) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw InputError(source + ": line " + std::to_string(number) + ": empty key");
        if (out.count(key)) {
            throw InputError(source + ": line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        out[key] = {std::string(trim(line.substr(eq + 1))), number};
    }
    return out;
}

[[noreturn]] void bad(const std::string& source, const std::string& key, const Entry& e,
                      const std::string& what) {
    throw InputError(source + ": line " + std::to_string(e.line) + ", key '" + key + "': " + what);
}

template <class T>
T parse_integer(const std::string& source, const std::string& key, const Entry& e) {
    T v{};
    const auto* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
    if (e.value.empty() || ec != std::errc{} || ptr != last) bad(source, key, e, "expected an integer");
    return v;
}

double parse_real(const std::string& source, const std::string& key, const Entry& e) {
    double v = 0.0;
    const auto* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), last, v);
    if (e.value.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        bad(source, key, e, "expected a finite number");
    }
    return v;
}

Date parse_date_entry(const std::string& source, const std::string& key, const Entry& e) {
    try {
        return parse_date(e.value);
    } catch (const InputError& err) {
        bad(source, key, e, err.what());
    }
}

bool parse_bool(const std::string& source, const std::string& key, const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    bad(source, key, e, "expected true or false");
}

LogisticTime parse_time(const std::string& source, const std::string& key, const Entry& e) {
    if (e.value == "relative") return LogisticTime::SinceActivation;
    if (e.value == "absolute") return LogisticTime::Absolute;
    bad(source, key, e, "expected 'relative' or 'absolute'");
}

std::vector<std::string> parse_zones(const std::string& source, const std::string& key, const Entry& e) {
    auto zones = split_list(e.value);
    for (const auto& z : zones) {
        if (!valid_zone_id(z)) bad(source, key, e, "invalid zone identifier '" + z + "'");
    }
    return zones;
}

using Handlers = std::map<std::string, std::function<void(const std::string&, const Entry&)>>;

void dispatch(const std::map<std::string, Entry>& entries, const Handlers& handlers,
              const std::string& source) {
    for (const auto& [key, entry] : entries) {
        const auto it = handlers.find(key);
        if (it == handlers.end()) bad(source, key, entry, "unknown key");
        it->second(key, entry);
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
    const std::filesystem::path p(value);
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

bool valid_zone_id(std::string_view zone) {
    if (zone.empty()) return false;
    for (char c : zone) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    while (true) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::filesystem::path RunConfig::res_path(const std::string& zone) const {
    std::string p = res_pattern;
    const std::string token = "{zone}";
    for (auto pos = p.find(token); pos != std::string::npos; pos = p.find(token, pos + zone.size())) {
        p.replace(pos, token.size(), zone);
    }
    return p;
}

void RunConfig::validate() const {
    if (zones.empty()) throw InputError("config: zone list is empty");
    std::set<std::string> seen;
    for (const auto& z : zones) {
        if (!valid_zone_id(z)) throw InputError("config: invalid zone identifier '" + z + "'");
        if (!seen.insert(z).second) throw InputError("config: zone '" + z + "' listed twice");
    }
    if (prices.empty()) throw InputError("config: 'prices' is required");
    if (res_pattern.empty()) throw InputError("config: 'res' is required");
    if (zones.size() > 1 && res_pattern.find("{zone}") == std::string::npos) {
        throw InputError("config: 'res' must contain {zone} when several zones are analysed");
    }
    if (start && end && !(*start < *end)) throw InputError("config: start must precede end");
    if (start && !(*start < t0)) throw InputError("config: t0 must fall strictly after start");
    if (end && !(t0 < *end)) throw InputError("config: t0 must fall strictly before end");
    if (min_hours < 1 || min_hours > 24) throw InputError("config: min_hours must lie in 1..24");
    if (acf_max_lag < 1) throw InputError("config: acf_max_lag must be positive");
    if (rolling_window < 2) throw InputError("config: rolling_window must be at least 2");
    const auto positive = [](int k, const char* name) {
        if (k < 1) throw InputError(std::string("config: ") + name + " must be positive");
    };
    positive(knots.trend, "knots_trend");
    positive(knots.lag, "knots_lag");
    positive(knots.res, "knots_res");
    positive(knots.intervention, "knots_intervention");
    positive(knots.variance_lag, "knots_variance_lag");
    if (knots.dayyear < 5) throw InputError("config: knots_dayyear must be at least 5");
    if (knots.dayweek < 5) throw InputError("config: knots_dayweek must be at least 5");
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::string& source) {
    RunConfig c;
    const auto& s = source;
    const Handlers h{
        {"prices", [&](auto&, auto& e) { c.prices = resolve(base_dir, e.value); }},
        {"res", [&](auto&, auto& e) { c.res_pattern = resolve(base_dir, e.value).string(); }},
        {"holidays", [&](auto&, auto& e) { c.holidays = resolve(base_dir, e.value); }},
        {"zones", [&](auto& k, auto& e) { c.zones = parse_zones(s, k, e); }},
        {"start", [&](auto& k, auto& e) { c.start = parse_date_entry(s, k, e); }},
        {"end", [&](auto& k, auto& e) { c.end = parse_date_entry(s, k, e); }},
        {"t0", [&](auto& k, auto& e) { c.t0 = parse_date_entry(s, k, e); }},
        {"out", [&](auto&, auto& e) { c.out = resolve(base_dir, e.value); }},
        {"seed", [&](auto& k, auto& e) { c.seed = parse_integer<std::uint64_t>(s, k, e); }},
        {"min_hours", [&](auto& k, auto& e) { c.min_hours = parse_integer<int>(s, k, e); }},
        {"acf_max_lag", [&](auto& k, auto& e) { c.acf_max_lag = parse_integer<std::size_t>(s, k, e); }},
        {"rolling_window", [&](auto& k, auto& e) { c.rolling_window = parse_integer<std::size_t>(s, k, e); }},
        {"logistic_time", [&](auto& k, auto& e) { c.logistic_time = parse_time(s, k, e); }},
        {"knots_trend", [&](auto& k, auto& e) { c.knots.trend = parse_integer<int>(s, k, e); }},
        {"knots_dayyear", [&](auto& k, auto& e) { c.knots.dayyear = parse_integer<int>(s, k, e); }},
        {"knots_dayweek", [&](auto& k, auto& e) { c.knots.dayweek = parse_integer<int>(s, k, e); }},
        {"knots_lag", [&](auto& k, auto& e) { c.knots.lag = parse_integer<int>(s, k, e); }},
        {"knots_res", [&](auto& k, auto& e) { c.knots.res = parse_integer<int>(s, k, e); }},
        {"knots_intervention", [&](auto& k, auto& e) { c.knots.intervention = parse_integer<int>(s, k, e); }},
        {"knots_variance_lag", [&](auto& k, auto& e) { c.knots.variance_lag = parse_integer<int>(s, k, e); }},
    };
    dispatch(parse_key_values(text, source), h, source);
    return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
    const auto base = std::filesystem::absolute(file).parent_path();
    return parse_run_config(read_text_file(file), base, file.string());
}

std::string format_run_config(const RunConfig& c) {
    std::string out;
    const auto line = [&out](const std::string& k, const std::string& v) { out += k + " = " + v + '\n'; };
    line("prices", c.prices.string());
    line("res", c.res_pattern);
    if (c.holidays) line("holidays", c.holidays->string());
    std::string zones;
    for (std::size_t i = 0; i < c.zones.size(); ++i) zones += (i ? "," : "") + c.zones[i];
    line("zones", zones);
    if (c.start) line("start", format_date(*c.start));
    if (c.end) line("end", format_date(*c.end));
    line("t0", format_date(c.t0));
    line("out", c.out.string());
    line("seed", std::to_string(c.seed));
    line("min_hours", std::to_string(c.min_hours));
    line("acf_max_lag", std::to_string(c.acf_max_lag));
    line("rolling_window", std::to_string(c.rolling_window));
    line("logistic_time", c.logistic_time == LogisticTime::Absolute ? "absolute" : "relative");
    line("knots_trend", std::to_string(c.knots.trend));
    line("knots_dayyear", std::to_string(c.knots.dayyear));
    line("knots_dayweek", std::to_string(c.knots.dayweek));
    line("knots_lag", std::to_string(c.knots.lag));
    line("knots_res", std::to_string(c.knots.res));
    line("knots_intervention", std::to_string(c.knots.intervention));
    line("knots_variance_lag", std::to_string(c.knots.variance_lag));
    return out;
}

void SimConfig::validate() const {
    if (zones.empty()) throw InputError("simulation config: zone list is empty");
    std::set<std::string> seen;
    for (const auto& z : zones) {
        if (!valid_zone_id(z)) throw InputError("simulation config: invalid zone identifier '" + z + "'");
        if (!seen.insert(z).second) throw InputError("simulation config: zone '" + z + "' listed twice");
    }
    for (const auto& z : effect_zones) {
        if (!seen.count(z)) throw InputError("simulation config: effect zone '" + z + "' is not in zones");
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("simulation config: ") + e.what());
    }
}

SimSpec SimConfig::zone_spec(const std::string& zone) const {
    SimSpec s = spec;
    if (!effect_zones.count(zone)) s.garch.a = 0.0;
    if (!common_draws) s.seed = spec.seed ^ fnv1a(zone);
    return s;
}

SimConfig parse_sim_config(std::string_view text, const std::string& source) {
    SimConfig c;
    const auto& s = source;
    std::optional<Date> t0;
    auto& g = c.spec.garch;
    const Handlers h{
        {"zones", [&](auto& k, auto& e) { c.zones = parse_zones(s, k, e); }},
        {"effect_zones", [&](auto& k, auto& e) {
             const auto z = parse_zones(s, k, e);
             c.effect_zones = {z.begin(), z.end()};
         }},
        {"start", [&](auto& k, auto& e) { c.spec.start = parse_date_entry(s, k, e); }},
        {"n_days", [&](auto& k, auto& e) { c.spec.n_days = parse_integer<std::size_t>(s, k, e); }},
        {"t0", [&](auto& k, auto& e) { t0 = parse_date_entry(s, k, e); }},
        {"seed", [&](auto& k, auto& e) { c.spec.seed = parse_integer<std::uint64_t>(s, k, e); }},
        {"common_draws", [&](auto& k, auto& e) { c.common_draws = parse_bool(s, k, e); }},
        {"omega", [&](auto& k, auto& e) { g.omega = parse_real(s, k, e); }},
        {"alpha", [&](auto& k, auto& e) { g.alpha = parse_real(s, k, e); }},
        {"beta", [&](auto& k, auto& e) { g.beta = parse_real(s, k, e); }},
        {"a", [&](auto& k, auto& e) { g.a = parse_real(s, k, e); }},
        {"b", [&](auto& k, auto& e) { g.b = parse_real(s, k, e); }},
        {"c", [&](auto& k, auto& e) { g.c = parse_real(s, k, e); }},
        {"logistic_time", [&](auto& k, auto& e) { g.time = parse_time(s, k, e); }},
    };
    dispatch(parse_key_values(text, source), h, source);
    if (t0) {
        const long idx = days_between(c.spec.start, *t0);
        if (idx < 0) throw InputError(source + ": t0 precedes start");
        c.spec.t0_index = static_cast<std::size_t>(idx);
    }
    g.t0_index = c.spec.t0_index;
    return c;
}

SimConfig load_sim_config(const std::filesystem::path& file) {
    return parse_sim_config(read_text_file(file), file.string());
}

}  // namespace hetvol
