#pragma once

#include "hetvol/pipeline.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hetvol {

struct TermSummary {
    std::string name;
    std::string kind;  // "smooth" or "linear"
    double edf = 0.0;
    std::optional<double> lambda;
    std::optional<double> coefficient;

    bool operator==(const TermSummary&) const = default;
};

/// One row of the GARCH-L parameter table.
struct ParameterRow {
    std::string name;
    double estimate = 0.0;
    std::optional<double> std_error;  // absent when the Hessian gave none
    std::optional<double> t_stat;
    double p_value = 1.0;
    bool significant_5pct = false;

    bool operator==(const ParameterRow&) const = default;
};

/// Machine-readable per-zone results. Variances are in EUR^2.
struct ZoneReport {
    std::string zone;
    std::string start;
    std::string end;
    std::string t0;
    std::size_t n_days = 0;
    std::size_t missing_days = 0;
    std::vector<std::string> warnings;

    std::vector<TermSummary> mean_terms;
    double mean_rss = 0.0;
    double mean_total_edf = 0.0;
    bool mean_converged = false;
    int mean_iterations = 0;
    std::vector<double> acf_raw;
    std::vector<double> acf_resid;
    double max_abs_acf_resid = 0.0;  // over lags 1..acf_max_lag

    std::vector<ParameterRow> garchl;
    double garchl_loglik = 0.0;
    bool garchl_converged = false;
    int garchl_starts_tried = 0;
    int garchl_starts_converged = 0;
    bool garchl_full_hessian = false;
    std::string logistic_time;

    std::vector<TermSummary> npvar_full_terms;
    std::vector<TermSummary> npvar_reduced_terms;
    double anova_f = 0.0;
    double anova_df_num = 0.0;
    double anova_df_den = 0.0;
    double anova_p = 1.0;
    bool anova_significant_5pct = false;
    double npvar_final_effect = 0.0;  // h1(Int) - h1(0) on the last day

    double pre_unconditional_variance = 0.0;  // omega / (1 - alpha - beta)
    double pre_mean_sigma2_garchl = 0.0;
    double post_mean_sigma2_garchl = 0.0;
    double pre_mean_sigma2_npvar = 0.0;
    double post_mean_sigma2_npvar = 0.0;
    double relative_increase = 0.0;  // a / (omega / (1 - alpha - beta))

    bool operator==(const ZoneReport&) const = default;
};

ZoneReport make_report(const ZoneAnalysis& analysis);

/// JSON text; missing optionals become null and no NaN or infinity is ever written.
std::string to_json(const ZoneReport& report);
/// Inverse of to_json. Throws InputError on malformed documents.
ZoneReport report_from_json(std::string_view text);

}  // namespace hetvol
