#include "hetvol/config.hpp"
#include "hetvol/csv_io.hpp"
#include "hetvol/errors.hpp"
#include "hetvol/pipeline.hpp"
#include "hetvol/simulate.hpp"
#include "hetvol/stats.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>

namespace fs = std::filesystem;
using namespace hetvol;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitInput = 2;

struct CommonFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string zones;
    std::string t0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "Configuration file (key = value)");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--zones", f.zones, "Comma-separated zone identifiers");
    cmd->add_option("--t0", f.t0, "Intervention date (YYYY-MM-DD)");
}

std::vector<std::string> zone_list(const std::string& text) {
    auto zones = split_list(text);
    for (const auto& z : zones) {
        if (!valid_zone_id(z)) throw InputError("--zones: invalid zone identifier '" + z + "'");
    }
    if (zones.empty()) throw InputError("--zones: empty zone list");
    return zones;
}

RunConfig run_config(const CommonFlags& f) {
    if (f.config.empty()) throw InputError("--config is required");
    RunConfig c = load_run_config(f.config);
    if (!f.out.empty()) c.out = f.out;
    if (f.seed) c.seed = *f.seed;
    if (!f.zones.empty()) c.zones = zone_list(f.zones);
    if (!f.t0.empty()) c.t0 = parse_date(f.t0);
    c.validate();
    return c;
}

int cmd_run(const CommonFlags& f) {
    const RunConfig c = run_config(f);
    const RunSummary summary = run_study(c, &std::cout);
    std::size_t failed = 0;
    for (const auto& z : summary.zones) failed += z.ok ? 0 : 1;
    std::cout << summary.zones.size() - failed << " of " << summary.zones.size()
              << " zones completed; results in " << c.out.string() << '\n';
    return summary.exit_code() == 0 ? kExitOk : kExitPartial;
}

// Hourly profile whose quantity-weighted mean is exactly zero.
double hourly_shape(int hour) { return 8.0 * std::sin(2.0 * std::numbers::pi * (hour - 1) / 24.0); }
double hourly_quantity(int hour) { return 1000.0 + 300.0 * std::cos(2.0 * std::numbers::pi * (hour - 1) / 24.0); }

int cmd_simulate(const CommonFlags& f) {
    SimConfig sc = f.config.empty() ? SimConfig{} : load_sim_config(f.config);
    if (f.seed) sc.spec.seed = *f.seed;
    if (!f.zones.empty()) {
        sc.zones = zone_list(f.zones);
        std::set<std::string> keep;
        for (const auto& z : sc.zones) {
            if (sc.effect_zones.count(z)) keep.insert(z);
        }
        sc.effect_zones = keep;
    }
    if (!f.t0.empty()) {
        const long idx = days_between(sc.spec.start, parse_date(f.t0));
        if (idx < 0) throw InputError("--t0 precedes the simulation start");
        sc.spec.t0_index = static_cast<std::size_t>(idx);
        sc.spec.garch.t0_index = sc.spec.t0_index;
    }
    sc.validate();
    const fs::path out = f.out.empty() ? fs::path("hetvol_sim") : fs::path(f.out);

    CsvWriter hourly({"date", "hour", "zone", "price_eur_mwh", "quantity_mwh"});
    std::set<Date> holidays;
    for (const auto& zone : sc.zones) {
        const SimResult sim = simulate(sc.zone_spec(zone));
        holidays = sim.holidays;
        for (std::size_t t = 0; t < sim.prices.size(); ++t) {
            const std::string date = format_date(sim.prices.date(t));
            for (int h = 1; h <= 24; ++h) {
                hourly.row({date, std::to_string(h), zone, format_number(sim.prices.value(t) + hourly_shape(h)),
                            format_number(hourly_quantity(h))});
            }
        }
        write_daily_csv(out / ("res_" + zone + ".csv"), sim.res);
        GarchLParams g = sc.zone_spec(zone).garch;
        g.t0_index = sc.spec.t0_index;
        CsvWriter truth({"date", "mu_eur_mwh", "sigma2_eur2", "eps_eur_mwh", "intervention_eur2"});
        for (std::size_t t = 0; t < sim.prices.size(); ++t) {
            truth.row({format_date(sim.prices.date(t)), format_number(sim.mu[t]), format_number(sim.sigma2[t]),
                       format_number(sim.eps[t]), format_number(intervention_value(g, t))});
        }
        truth.save(out / ("truth_" + zone + ".csv"));
    }
    hourly.save(out / "prices_hourly.csv");
    write_holidays(out / "holidays.txt", holidays);

    RunConfig rc;
    rc.prices = "prices_hourly.csv";
    rc.res_pattern = "res_{zone}.csv";
    rc.holidays = fs::path("holidays.txt");
    rc.zones = sc.zones;
    rc.t0 = add_days(sc.spec.start, static_cast<long>(sc.spec.t0_index));
    rc.out = "results";
    rc.seed = sc.spec.seed;
    rc.logistic_time = sc.spec.garch.time;
    write_text_file(out / "run.cfg", format_run_config(rc));
    std::cout << "wrote " << sc.zones.size() << " zone(s) of " << sc.spec.n_days << " days to " << out.string()
              << '\n';
    return kExitOk;
}

// Daily series for the acf/rollvar commands: --input, or each configured zone's prices.
std::vector<std::pair<std::string, DailySeries>> diagnostic_inputs(const CommonFlags& f, const std::string& input) {
    std::vector<std::pair<std::string, DailySeries>> out;
    if (!input.empty()) {
        out.emplace_back("", read_daily_csv(input));
        return out;
    }
    const RunConfig c = run_config(f);
    for (auto& zi : load_inputs(c)) out.emplace_back(zi.zone, std::move(zi.prices));
    return out;
}

fs::path diagnostic_path(const CommonFlags& f, const std::string& stem, const std::string& zone) {
    const fs::path dir = f.out.empty() ? fs::path(".") : fs::path(f.out);
    return dir / (zone.empty() ? stem + ".csv" : stem + "_" + zone + ".csv");
}

int cmd_acf(const CommonFlags& f, const std::string& input, std::size_t max_lag) {
    for (const auto& [zone, series] : diagnostic_inputs(f, input)) {
        const auto v = series.present_values();
        if (v.size() <= max_lag) throw InputError("series too short for --max-lag " + std::to_string(max_lag));
        const auto r = acf(std::span<const double>(v), max_lag);
        CsvWriter w({"lag", "acf"});
        for (std::size_t k = 0; k < r.size(); ++k) w.row({std::to_string(k), format_number(r[k])});
        if (f.out.empty() && !input.empty()) {
            std::cout << w.text();
        } else {
            w.save(diagnostic_path(f, "acf", zone));
        }
    }
    return kExitOk;
}

int cmd_rollvar(const CommonFlags& f, const std::string& input, std::size_t window) {
    for (const auto& [zone, series] : diagnostic_inputs(f, input)) {
        const auto rv = rolling_variance(series, window);
        if (f.out.empty() && !input.empty()) {
            CsvWriter w({"date", "variance_eur2"});
            for (std::size_t i = 0; i < rv.size(); ++i) {
                w.row({format_date(rv.date(i)), rv.missing(i) ? "" : format_number(rv.value(i))});
            }
            std::cout << w.text();
        } else {
            write_daily_csv(diagnostic_path(f, "rolling_variance", zone), rv, "variance_eur2");
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heteroscedastic additive models for daily electricity prices"};
    app.require_subcommand(1);

    CommonFlags run_f, sim_f, acf_f, rv_f;
    std::string acf_input, rv_input;
    std::size_t max_lag = 30;
    std::size_t window = 30;

    auto* run = app.add_subcommand("run", "Full study per zone: mean, GARCH-L and non-parametric variance fits");
    add_common(run, run_f);
    auto* sim = app.add_subcommand("simulate", "Write a synthetic dataset with known ground truth");
    add_common(sim, sim_f);
    auto* acf_cmd = app.add_subcommand("acf", "Sample autocorrelations of a daily series");
    add_common(acf_cmd, acf_f);
    acf_cmd->add_option("--input", acf_input, "Daily CSV (date,value)");
    acf_cmd->add_option("--max-lag", max_lag, "Largest lag")->check(CLI::PositiveNumber);
    auto* rv_cmd = app.add_subcommand("rollvar", "Trailing rolling variance of a daily series");
    add_common(rv_cmd, rv_f);
    rv_cmd->add_option("--input", rv_input, "Daily CSV (date,value)");
    rv_cmd->add_option("--window", window, "Window length in days")->check(CLI::Range(2, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*run) return cmd_run(run_f);
        if (*sim) return cmd_simulate(sim_f);
        if (*acf_cmd) return cmd_acf(acf_f, acf_input, max_lag);
        if (*rv_cmd) return cmd_rollvar(rv_f, rv_input, window);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitPartial;
    }
    return kExitOk;
}
