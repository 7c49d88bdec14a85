#include "hetvol/pipeline.hpp"

#include "hetvol/aggregate.hpp"
#include "hetvol/csv_io.hpp"
#include "hetvol/errors.hpp"
#include "hetvol/report.hpp"
#include "hetvol/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <future>
#include <limits>
#include <ostream>

namespace hetvol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> acf_of_present(const DailySeries& s, std::size_t max_lag) {
    const auto v = s.present_values();
    if (v.size() <= max_lag) throw FitError("too few observations for an ACF up to lag " + std::to_string(max_lag));
    return acf(std::span<const double>(v), max_lag);
}

void write_acf(const std::filesystem::path& path, const std::vector<double>& r) {
    CsvWriter w({"lag", "acf"});
    for (std::size_t k = 0; k < r.size(); ++k) w.row({std::to_string(k), format_number(r[k])});
    w.save(path);
}

// Smooth term evaluated on a 101-point grid over the observed covariate range.
void write_effect(const std::filesystem::path& path, const AdditiveFit& fit, const std::string& term) {
    CsvWriter w({"res_mwh", "effect"});
    const auto* t = fit.find(term);
    if (t && t->smooth) {
        const double lo = t->smooth->basis.domain_lo();
        const double hi = t->smooth->basis.domain_hi();
        for (int i = 0; i <= 100; ++i) {
            const double x = lo + (hi - lo) * i / 100.0;
            w.row({format_number(x), format_number(t->predict(x))});
        }
    }
    w.save(path);
}

}  // namespace

std::vector<double> contiguous_residuals(const MeanModelFit& mean, std::size_t& offset) {
    if (mean.rows.empty()) throw FitError("mean model produced no residuals");
    const std::size_t first = mean.rows.front();
    const std::size_t last = mean.rows.back();
    if (last - first + 1 != mean.rows.size()) {
        throw FitError("mean-model residuals have gaps between " + format_date(mean.residuals.date(first)) +
                       " and " + format_date(mean.residuals.date(last)) +
                       "; GARCH-L needs a contiguous span");
    }
    offset = first;
    return mean.fit.residuals;
}

ZoneAnalysis analyze_zone(const ZoneInput& in, const AnalysisOptions& opt) {
    ZoneAnalysis a;
    a.zone = in.zone;
    a.t0 = in.t0;
    a.prices = in.prices;
    a.res = in.res;
    a.warnings = in.warnings;
    const long t0 = days_between(in.prices.start(), in.t0);
    if (t0 <= 0 || t0 >= static_cast<long>(in.prices.size())) {
        throw std::invalid_argument("t0 " + format_date(in.t0) + " is outside the price series");
    }
    a.t0_index = static_cast<std::size_t>(t0);
    a.calendar = build_calendar(in.prices.start(), in.prices.size(), in.holidays);

    a.rolling_variance = rolling_variance(in.prices, opt.rolling_window);
    if (!in.prices.complete()) a.warnings.push_back("price series has missing days; ACF computed on present days");
    a.acf_raw = acf_of_present(in.prices, opt.acf_max_lag);

    MeanModelOptions mopt;
    mopt.knots = opt.knots;
    mopt.backfit = opt.backfit;
    a.mean = fit_mean_model(in.prices, a.calendar, in.res, mopt);
    if (!a.mean.fit.converged) a.warnings.push_back("mean-model backfitting reached the iteration limit");
    a.acf_resid = acf(std::span<const double>(a.mean.fit.residuals), opt.acf_max_lag);

    const auto eps = contiguous_residuals(a.mean, a.eps_offset);
    if (a.t0_index <= a.eps_offset || a.t0_index >= a.eps_offset + eps.size()) {
        throw FitError("t0 falls outside the residual span");
    }
    GarchLFitOptions gopt;
    gopt.time = opt.logistic_time;
    gopt.seed = opt.seed;
    a.garch = fit_garchl(eps, a.t0_index - a.eps_offset, gopt);

    const std::size_t n = in.prices.size();
    std::vector<double> curve(n, 0.0), s2(n, kNaN);
    std::vector<bool> s2_missing(n, true);
    for (std::size_t d = a.eps_offset; d < n; ++d) curve[d] = intervention_value(a.garch.params, d - a.eps_offset);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        s2[a.eps_offset + i] = a.garch.sigma2[i];
        s2_missing[a.eps_offset + i] = false;
    }
    a.intervention_garchl = DailySeries(in.prices.start(), std::move(curve));
    a.condvar_garchl = DailySeries(in.prices.start(), std::move(s2), std::move(s2_missing));

    VarianceModelOptions vopt;
    vopt.knots = opt.knots;
    vopt.backfit = opt.backfit;
    a.npvar_full = fit_npvar_model(a.mean.residuals, a.calendar, in.res, a.t0_index, true, vopt);
    a.npvar_reduced = fit_npvar_model(a.mean.residuals, a.calendar, in.res, a.t0_index, false, vopt);
    if (!a.npvar_full.fit.converged || !a.npvar_reduced.fit.converged) {
        a.warnings.push_back("variance-model backfitting reached the iteration limit");
    }
    try {
        a.anova = anova_nested(a.npvar_full.fit, a.npvar_reduced.fit, a.npvar_full.fit.n());
    } catch (const FitError& e) {
        a.anova = {kNaN, kNaN, kNaN, kNaN};
        a.warnings.push_back(std::string("ANOVA unavailable: ") + e.what());
    }
    return a;
}

AnalysisOptions analysis_options(const RunConfig& c) {
    AnalysisOptions o;
    o.knots = c.knots;
    o.acf_max_lag = c.acf_max_lag;
    o.rolling_window = c.rolling_window;
    o.logistic_time = c.logistic_time;
    o.seed = c.seed;
    return o;
}

std::vector<ZoneInput> load_inputs(const RunConfig& c) {
    c.validate();
    const auto hourly = read_hourly_csv(c.prices);
    std::set<Date> holidays;
    if (c.holidays) holidays = read_holidays(*c.holidays);

    std::vector<ZoneInput> out;
    for (const auto& zone : c.zones) {
        const auto it = hourly.find(zone);
        if (it == hourly.end()) throw InputError(c.prices.string() + ": no rows for zone '" + zone + "'");
        AggregationOptions aopt;
        aopt.min_hours = c.min_hours;
        auto agg = weighted_daily_average(it->second, aopt);
        DailySeries prices = agg.series;
        if (c.start || c.end) {
            prices = prices.between(c.start.value_or(prices.start()), c.end.value_or(prices.end()));
        }
        const long t0 = days_between(prices.start(), c.t0);
        if (t0 <= 0 || t0 >= static_cast<long>(prices.size())) {
            throw InputError("zone '" + zone + "': t0 " + format_date(c.t0) + " is outside the data span " +
                             format_date(prices.start()) + " .. " + format_date(prices.end()));
        }
        std::set<Date> zone_holidays = holidays;
        if (!c.holidays) zone_holidays = italian_holidays(year_of(prices.start()), year_of(prices.end()));
        ZoneInput zi{zone, std::move(prices), read_daily_csv(c.res_path(zone)), std::move(zone_holidays), c.t0,
                     std::move(agg.warnings)};
        out.push_back(std::move(zi));
    }
    return out;
}

int RunSummary::exit_code() const {
    return std::all_of(zones.begin(), zones.end(), [](const ZoneOutcome& z) { return z.ok; }) ? 0 : 1;
}

void write_zone_outputs(const ZoneAnalysis& a, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto file = [&](const std::string& stem) { return dir / (stem + a.zone + ".csv"); };
    write_text_file(dir / ("report_" + a.zone + ".json"), to_json(make_report(a)));
    write_daily_csv(file("rolling_variance_"), a.rolling_variance, "variance_eur2");
    write_acf(file("acf_raw_"), a.acf_raw);
    write_acf(file("acf_resid_"), a.acf_resid);
    write_daily_csv(file("intervention_garchl_"), a.intervention_garchl, "effect_eur2");
    write_daily_csv(file("intervention_npvar_"), a.npvar_full.intervention, "effect_eur2");
    write_daily_csv(file("condvar_garchl_"), a.condvar_garchl, "sigma2_eur2");
    write_daily_csv(file("condvar_npvar_"), a.npvar_full.sigma2, "sigma2_eur2");
    write_effect(file("res_effect_mean_"), a.mean.fit, "res");
    write_effect(file("res_effect_var_"), a.npvar_full.fit, "res");
}

RunSummary run_study(const RunConfig& config, std::ostream* log) {
    const auto inputs = load_inputs(config);
    const auto opt = analysis_options(config);

    std::vector<std::future<ZoneOutcome>> jobs;
    for (const auto& in : inputs) {
        jobs.push_back(std::async(std::launch::async, [&in, &opt, &config] {
            ZoneOutcome z;
            z.zone = in.zone;
            z.directory = config.out / in.zone;
            try {
                const auto analysis = analyze_zone(in, opt);
                write_zone_outputs(analysis, z.directory);
                z.ok = true;
            } catch (const std::exception& e) {
                z.error = e.what();
            }
            return z;
        }));
    }
    RunSummary summary;
    for (auto& j : jobs) summary.zones.push_back(j.get());

    nlohmann::json doc = {{"zones", nlohmann::json::array()}};
    for (const auto& z : summary.zones) {
        doc["zones"].push_back({{"zone", z.zone},
                                {"status", z.ok ? "ok" : "failed"},
                                {"error", z.ok ? nlohmann::json(nullptr) : nlohmann::json(z.error)}});
        if (log) *log << z.zone << ": " << (z.ok ? "ok" : "FAILED: " + z.error) << '\n';
    }
    write_text_file(config.out / "summary.json", doc.dump(2) + '\n');
    return summary;
}

}  // namespace hetvol
