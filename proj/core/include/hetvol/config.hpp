#pragma once

#include "hetvol/date.hpp"
#include "hetvol/garch_logistic.hpp"
#include "hetvol/simulate.hpp"
#include "hetvol/variance_models.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace hetvol {

/// Settings of a full study run, read from a `key = value` file.
///
/// Keys: prices, res, holidays, zones, start, end, t0, out, seed, min_hours,
/// acf_max_lag, rolling_window, logistic_time, knots_trend, knots_dayyear,
/// knots_dayweek, knots_lag, knots_res, knots_intervention, knots_variance_lag.
/// `res` may contain `{zone}`. Relative paths resolve against the config file's directory.
struct RunConfig {
    std::filesystem::path prices;
    std::string res_pattern;
    std::optional<std::filesystem::path> holidays;  // none: Italian national holidays
    std::vector<std::string> zones;
    std::optional<Date> start;
    std::optional<Date> end;
    Date t0 = make_date(2016, 5, 28);
    std::filesystem::path out = "hetvol_out";
    std::uint64_t seed = 1;
    int min_hours = 20;
    std::size_t acf_max_lag = 30;
    std::size_t rolling_window = 30;
    LogisticTime logistic_time = LogisticTime::SinceActivation;
    ModelKnots knots;

    [[nodiscard]] std::filesystem::path res_path(const std::string& zone) const;
    /// Throws InputError naming the offending key.
    void validate() const;
};

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir,
                           const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& file);
/// Serializes with absolute or as-given paths; parse_run_config reads it back.
std::string format_run_config(const RunConfig& config);

/// Synthetic dataset description for `hetvol simulate`.
///
/// Keys: zones, effect_zones, start, n_days, t0, seed, common_draws, omega, alpha,
/// beta, a, b, c, logistic_time. Zones not listed in effect_zones get a = 0.
struct SimConfig {
    SimSpec spec;
    std::vector<std::string> zones{"SICI", "NORD"};
    std::set<std::string> effect_zones{"SICI"};
    bool common_draws = true;  // every zone shares the seed's draws

    void validate() const;
    /// Spec for one zone: intervention height and seed resolved.
    [[nodiscard]] SimSpec zone_spec(const std::string& zone) const;
};

SimConfig parse_sim_config(std::string_view text, const std::string& source = "<config>");
SimConfig load_sim_config(const std::filesystem::path& file);

/// Zone identifiers double as file-name components: [A-Za-z0-9_-]+.
bool valid_zone_id(std::string_view zone);
std::vector<std::string> split_list(std::string_view text);
std::uint64_t fnv1a(std::string_view text);

}  // namespace hetvol
