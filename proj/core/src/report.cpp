#include "hetvol/report.hpp"

#include "hetvol/errors.hpp"
#include "hetvol/stats.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hetvol {

using nlohmann::json;

namespace {

json number(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json number(const std::optional<double>& v) {
    return v ? number(*v) : json(nullptr);
}

json numbers(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(number(x));
    return out;
}

double get_number(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::optional<double> get_optional(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

std::vector<double> get_numbers(const json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(get_number(x));
    return out;
}

std::vector<TermSummary> summarize(const AdditiveFit& fit) {
    std::vector<TermSummary> out;
    for (const auto& t : fit.terms) {
        TermSummary s;
        s.name = t.name;
        s.edf = t.edf;
        if (t.kind == TermSpec::Kind::Smooth) {
            s.kind = "smooth";
            s.lambda = t.smooth->lambda;
        } else {
            s.kind = "linear";
            s.coefficient = t.coefficient;
        }
        out.push_back(std::move(s));
    }
    return out;
}

json terms_json(const std::vector<TermSummary>& terms) {
    json out = json::array();
    for (const auto& t : terms) {
        out.push_back({{"name", t.name}, {"kind", t.kind}, {"edf", number(t.edf)},
                       {"lambda", number(t.lambda)}, {"coefficient", number(t.coefficient)}});
    }
    return out;
}

std::vector<TermSummary> terms_from(const json& j) {
    std::vector<TermSummary> out;
    for (const auto& t : j) {
        out.push_back({t.at("name").get<std::string>(), t.at("kind").get<std::string>(),
                       get_number(t.at("edf")), get_optional(t.at("lambda")),
                       get_optional(t.at("coefficient"))});
    }
    return out;
}

// Mean of the present values of `s` over day indices [first, last).
double window_mean(const DailySeries& s, std::size_t first, std::size_t last) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = first; i < std::min(last, s.size()); ++i) {
        if (s.missing(i)) continue;
        sum += s.value(i);
        ++n;
    }
    return n ? sum / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ZoneReport make_report(const ZoneAnalysis& a) {
    ZoneReport r;
    r.zone = a.zone;
    r.start = format_date(a.prices.start());
    r.end = format_date(a.prices.end());
    r.t0 = format_date(a.t0);
    r.n_days = a.prices.size();
    r.missing_days = a.prices.size() - a.prices.count_present();
    r.warnings = a.warnings;

    r.mean_terms = summarize(a.mean.fit);
    r.mean_rss = a.mean.fit.rss;
    r.mean_total_edf = a.mean.fit.total_edf;
    r.mean_converged = a.mean.fit.converged;
    r.mean_iterations = a.mean.fit.n_iter;
    r.acf_raw = a.acf_raw;
    r.acf_resid = a.acf_resid;
    for (std::size_t k = 1; k < a.acf_resid.size(); ++k) {
        r.max_abs_acf_resid = std::max(r.max_abs_acf_resid, std::abs(a.acf_resid[k]));
    }

    const auto& g = a.garch;
    const auto values = g.params.values();
    for (std::size_t i = 0; i < GarchLParams::kCount; ++i) {
        ParameterRow row;
        row.name = GarchLParams::kNames[i];
        row.estimate = values[i];
        if (g.std_error_ok[i]) {
            row.std_error = g.std_errors[i];
            row.t_stat = g.t_stats[i];
        }
        row.p_value = g.p_values[i];
        row.significant_5pct = g.significant(i, 0.05);
        r.garchl.push_back(std::move(row));
    }
    r.garchl_loglik = g.loglik;
    r.garchl_converged = g.converged;
    r.garchl_starts_tried = g.starts_tried;
    r.garchl_starts_converged = g.starts_converged;
    r.garchl_full_hessian = g.std_errors_available;
    r.logistic_time = g.params.time == LogisticTime::Absolute ? "absolute" : "relative";

    r.npvar_full_terms = summarize(a.npvar_full.fit);
    r.npvar_reduced_terms = summarize(a.npvar_reduced.fit);
    r.anova_f = a.anova.f_stat;
    r.anova_df_num = a.anova.df_num;
    r.anova_df_den = a.anova.df_den;
    r.anova_p = a.anova.p_value;
    r.anova_significant_5pct = a.anova.p_value < 0.05;  // false when unavailable
    const auto& curve = a.npvar_full.intervention;
    r.npvar_final_effect = curve.missing(curve.size() - 1) ? 0.0 : curve.value(curve.size() - 1);

    r.pre_unconditional_variance = g.params.pre_unconditional_variance();
    r.pre_mean_sigma2_garchl = window_mean(a.condvar_garchl, 0, a.t0_index);
    r.post_mean_sigma2_garchl = window_mean(a.condvar_garchl, a.t0_index, a.prices.size());
    r.pre_mean_sigma2_npvar = window_mean(a.npvar_full.sigma2, 0, a.t0_index);
    r.post_mean_sigma2_npvar = window_mean(a.npvar_full.sigma2, a.t0_index, a.prices.size());
    r.relative_increase = g.params.a / r.pre_unconditional_variance;
    return r;
}

std::string to_json(const ZoneReport& r) {
    json params = json::array();
    for (const auto& p : r.garchl) {
        params.push_back({{"name", p.name},
                          {"estimate", number(p.estimate)},
                          {"std_error", number(p.std_error)},
                          {"t_stat", number(p.t_stat)},
                          {"p_value", number(p.p_value)},
                          {"significant_5pct", p.significant_5pct}});
    }
    const json j = {
        {"zone", r.zone},
        {"period", {{"start", r.start}, {"end", r.end}, {"t0", r.t0}}},
        {"n_days", r.n_days},
        {"missing_days", r.missing_days},
        {"warnings", r.warnings},
        {"mean_model",
         {{"terms", terms_json(r.mean_terms)},
          {"rss", number(r.mean_rss)},
          {"total_edf", number(r.mean_total_edf)},
          {"converged", r.mean_converged},
          {"iterations", r.mean_iterations},
          {"acf_raw", numbers(r.acf_raw)},
          {"acf_resid", numbers(r.acf_resid)},
          {"max_abs_acf_resid", number(r.max_abs_acf_resid)}}},
        {"garchl",
         {{"parameters", params},
          {"loglik", number(r.garchl_loglik)},
          {"converged", r.garchl_converged},
          {"starts_tried", r.garchl_starts_tried},
          {"starts_converged", r.garchl_starts_converged},
          {"full_hessian", r.garchl_full_hessian},
          {"logistic_time", r.logistic_time}}},
        {"npvar",
         {{"full_terms", terms_json(r.npvar_full_terms)},
          {"reduced_terms", terms_json(r.npvar_reduced_terms)},
          {"anova",
           {{"f_stat", number(r.anova_f)},
            {"df_num", number(r.anova_df_num)},
            {"df_den", number(r.anova_df_den)},
            {"p_value", number(r.anova_p)},
            {"significant_5pct", r.anova_significant_5pct}}},
          {"final_effect", number(r.npvar_final_effect)}}},
        {"volatility",
         {{"pre_unconditional_variance", number(r.pre_unconditional_variance)},
          {"pre_mean_sigma2_garchl", number(r.pre_mean_sigma2_garchl)},
          {"post_mean_sigma2_garchl", number(r.post_mean_sigma2_garchl)},
          {"pre_mean_sigma2_npvar", number(r.pre_mean_sigma2_npvar)},
          {"post_mean_sigma2_npvar", number(r.post_mean_sigma2_npvar)},
          {"relative_increase", number(r.relative_increase)}}},
    };
    return j.dump(2) + '\n';
}

ZoneReport report_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        ZoneReport r;
        r.zone = j.at("zone").get<std::string>();
        r.start = j.at("period").at("start").get<std::string>();
        r.end = j.at("period").at("end").get<std::string>();
        r.t0 = j.at("period").at("t0").get<std::string>();
        r.n_days = j.at("n_days").get<std::size_t>();
        r.missing_days = j.at("missing_days").get<std::size_t>();
        r.warnings = j.at("warnings").get<std::vector<std::string>>();

        const auto& m = j.at("mean_model");
        r.mean_terms = terms_from(m.at("terms"));
        r.mean_rss = get_number(m.at("rss"));
        r.mean_total_edf = get_number(m.at("total_edf"));
        r.mean_converged = m.at("converged").get<bool>();
        r.mean_iterations = m.at("iterations").get<int>();
        r.acf_raw = get_numbers(m.at("acf_raw"));
        r.acf_resid = get_numbers(m.at("acf_resid"));
        r.max_abs_acf_resid = get_number(m.at("max_abs_acf_resid"));

        const auto& g = j.at("garchl");
        for (const auto& p : g.at("parameters")) {
            r.garchl.push_back({p.at("name").get<std::string>(), get_number(p.at("estimate")),
                                get_optional(p.at("std_error")), get_optional(p.at("t_stat")),
                                get_number(p.at("p_value")), p.at("significant_5pct").get<bool>()});
        }
        r.garchl_loglik = get_number(g.at("loglik"));
        r.garchl_converged = g.at("converged").get<bool>();
        r.garchl_starts_tried = g.at("starts_tried").get<int>();
        r.garchl_starts_converged = g.at("starts_converged").get<int>();
        r.garchl_full_hessian = g.at("full_hessian").get<bool>();
        r.logistic_time = g.at("logistic_time").get<std::string>();

        const auto& v = j.at("npvar");
        r.npvar_full_terms = terms_from(v.at("full_terms"));
        r.npvar_reduced_terms = terms_from(v.at("reduced_terms"));
        const auto& an = v.at("anova");
        r.anova_f = get_number(an.at("f_stat"));
        r.anova_df_num = get_number(an.at("df_num"));
        r.anova_df_den = get_number(an.at("df_den"));
        r.anova_p = get_number(an.at("p_value"));
        r.anova_significant_5pct = an.at("significant_5pct").get<bool>();
        r.npvar_final_effect = get_number(v.at("final_effect"));

        const auto& vol = j.at("volatility");
        r.pre_unconditional_variance = get_number(vol.at("pre_unconditional_variance"));
        r.pre_mean_sigma2_garchl = get_number(vol.at("pre_mean_sigma2_garchl"));
        r.post_mean_sigma2_garchl = get_number(vol.at("post_mean_sigma2_garchl"));
        r.pre_mean_sigma2_npvar = get_number(vol.at("pre_mean_sigma2_npvar"));
        r.post_mean_sigma2_npvar = get_number(vol.at("post_mean_sigma2_npvar"));
        r.relative_increase = get_number(vol.at("relative_increase"));
        return r;
    } catch (const json::exception& e) {
        throw InputError(std::string("report JSON: ") + e.what());
    }
}

}  // namespace hetvol
