#pragma once

#include "hetvol/calendar.hpp"
#include "hetvol/config.hpp"
#include "hetvol/daily_series.hpp"
#include "hetvol/garch_logistic.hpp"
#include "hetvol/variance_models.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace hetvol {

struct ZoneInput {
    std::string zone;
    DailySeries prices;  // EUR/MWh
    DailySeries res;     // MWh
    std::set<Date> holidays;
    Date t0;
    std::vector<std::string> warnings;
};

struct AnalysisOptions {
    ModelKnots knots;
    BackfitOptions backfit;
    std::size_t acf_max_lag = 30;
    std::size_t rolling_window = 30;
    LogisticTime logistic_time = LogisticTime::SinceActivation;
    std::uint64_t seed = 1;
};

/// Everything estimated for one zone. Day indices refer to `prices`.
struct ZoneAnalysis {
    std::string zone;
    Date t0;
    std::size_t t0_index = 0;
    DailySeries prices;
    DailySeries res;
    CalendarDesign calendar;
    DailySeries rolling_variance;
    std::vector<double> acf_raw;
    std::vector<double> acf_resid;
    MeanModelFit mean;
    std::size_t eps_offset = 0;  // day index of the first residual fed to GARCH-L
    GarchLFit garch;
    DailySeries intervention_garchl;
    DailySeries condvar_garchl;
    VarianceModelFit npvar_full;
    VarianceModelFit npvar_reduced;
    AnovaResult anova;  // all NaN when the full fit ended up with fewer edf than the reduced one
    std::vector<std::string> warnings;
};

/// Mean fit, GARCH-L on the mean residuals, full and reduced non-parametric variance
/// fits and their ANOVA. Throws FitError or std::invalid_argument when a stage fails.
ZoneAnalysis analyze_zone(const ZoneInput& input, const AnalysisOptions& options);

/// Residuals of the mean model as one contiguous vector, with the day index of the first.
/// Throws FitError when the residual span has gaps.
std::vector<double> contiguous_residuals(const MeanModelFit& mean, std::size_t& offset);

AnalysisOptions analysis_options(const RunConfig& config);

/// Reads and validates every input of a run. Throws InputError on schema violations,
/// unknown zones or a t0 outside the data.
std::vector<ZoneInput> load_inputs(const RunConfig& config);

struct ZoneOutcome {
    std::string zone;
    bool ok = false;
    std::string error;
    std::filesystem::path directory;
};

struct RunSummary {
    std::vector<ZoneOutcome> zones;
    /// 0 when every zone succeeded, 1 otherwise.
    [[nodiscard]] int exit_code() const;
};

/// Writes report_<zone>.json and the plot CSVs into `dir`.
void write_zone_outputs(const ZoneAnalysis& analysis, const std::filesystem::path& dir);

/// Full study: load, analyse zones concurrently, write per-zone outputs and summary.json.
/// Input errors propagate as InputError; per-zone fit failures are recorded in the summary.
RunSummary run_study(const RunConfig& config, std::ostream* log = nullptr);

}  // namespace hetvol
