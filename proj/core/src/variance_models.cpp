#include "hetvol/variance_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace hetvol {

ModelKnots ModelKnots::scaled(double factor) const {
    const auto s = [factor](int k) { return std::max(1, static_cast<int>(std::lround(k * factor))); };
    ModelKnots out = *this;
    out.trend = s(trend);
    out.dayyear = std::max(5, s(dayyear));
    out.lag = s(lag);
    out.res = s(res);
    out.intervention = s(intervention);
    out.variance_lag = s(variance_lag);
    return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_calendar(const DailySeries& series, const CalendarDesign& cal, const char* who) {
    if (cal.start != series.start() || cal.size() != series.size()) {
        throw std::invalid_argument(std::string(who) +
                                    ": calendar must cover exactly the series span");
    }
}

std::optional<double> lookup(const DailySeries& s, Date d) {
    const auto i = s.index_of(d);
    if (!i || s.missing(*i)) return std::nullopt;
    return s.value(*i);
}

bool is_constant(const std::vector<double>& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return !(*hi > *lo);
}

// Smooth term, or nothing when the covariate carries no variation.
void add_smooth(std::vector<TermSpec>& terms, std::vector<std::string>& dropped, std::string name,
                std::vector<double> x, int n_interior) {
    if (is_constant(x)) {
        dropped.push_back(std::move(name));
        return;
    }
    auto basis = SplineBasis::uniform_for(x, n_interior);
    terms.push_back(TermSpec::smooth(std::move(name), std::move(x), std::move(basis)));
}

}  // namespace

MeanModelFit fit_mean_model(const DailySeries& prices, const CalendarDesign& cal,
                            const DailySeries& res, const MeanModelOptions& options) {
    check_calendar(prices, cal, "fit_mean_model");
    const std::size_t n = prices.size();
    if (n < 8) throw std::invalid_argument("fit_mean_model: need at least 8 days for the lags");

    std::vector<std::size_t> rows;
    std::vector<double> y, trend, dayyear, dayweek, bank, lag1, lag7, r;
    for (std::size_t t = 7; t < n; ++t) {
        if (prices.missing(t) || prices.missing(t - 1) || prices.missing(t - 7)) continue;
        const auto rv = lookup(res, prices.date(t));
        if (!rv) continue;
        rows.push_back(t);
        y.push_back(prices.value(t));
        trend.push_back(cal.trend[t]);
        dayyear.push_back(cal.dayyear[t]);
        dayweek.push_back(cal.dayweek[t]);
        bank.push_back(cal.bank[t]);
        lag1.push_back(prices.value(t - 1));
        lag7.push_back(prices.value(t - 7));
        r.push_back(*rv);
    }
    if (rows.size() < 30) {
        throw std::invalid_argument("fit_mean_model: too few complete days after dropping lags");
    }

    const auto& k = options.knots;
    std::vector<TermSpec> terms;
    std::vector<std::string> dropped;
    // Smoothing parameters are frozen on the first cycle, so the autoregressive terms go first.
    add_smooth(terms, dropped, "price_lag1", std::move(lag1), k.lag);
    add_smooth(terms, dropped, "price_lag7", std::move(lag7), k.lag);
    add_smooth(terms, dropped, "res", std::move(r), k.res);
    terms.push_back(TermSpec::smooth("dayweek", std::move(dayweek), SplineBasis::cyclic(1.0, 7.0, k.dayweek)));
    terms.push_back(TermSpec::linear("bank", std::move(bank)));
    terms.push_back(TermSpec::smooth("dayyear", std::move(dayyear), SplineBasis::cyclic(1.0, 365.0, k.dayyear)));
    add_smooth(terms, dropped, "trend", std::move(trend), k.trend);

    MeanModelFit out{fit_additive(y, terms, options.backfit), rows,
                     DailySeries::empty_like(prices.start(), n), DailySeries::empty_like(prices.start(), n)};
    std::vector<double> mu(n, kNaN), eps(n, kNaN);
    std::vector<bool> miss(n, true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        mu[rows[i]] = out.fit.fitted[i];
        eps[rows[i]] = out.fit.residuals[i];
        miss[rows[i]] = false;
    }
    out.fitted = DailySeries(prices.start(), std::move(mu), miss);
    out.residuals = DailySeries(prices.start(), std::move(eps), std::move(miss));
    return out;
}

double intervention_ramp(std::size_t t, std::size_t t0_index) {
    return t > t0_index ? static_cast<double>(t - t0_index) : 0.0;
}

VarianceModelFit fit_npvar_model(const DailySeries& eps, const CalendarDesign& cal,
                                 const DailySeries& res, std::size_t t0_index,
                                 bool include_intervention, const VarianceModelOptions& options) {
    check_calendar(eps, cal, "fit_npvar_model");
    const std::size_t n = eps.size();
    const auto window = static_cast<std::size_t>(options.ma_window);
    if (window < 1) throw std::invalid_argument("fit_npvar_model: MA window must be positive");
    if (t0_index >= n) throw std::invalid_argument("fit_npvar_model: t0 outside the series");

    std::vector<std::size_t> rows;
    std::vector<double> y, ramp, dayyear, dayweek, bank, lag1, ma, r;
    for (std::size_t t = window + 1; t < n; ++t) {
        bool ok = !eps.missing(t);
        for (std::size_t j = 1; ok && j <= window + 1; ++j) ok = !eps.missing(t - j);
        if (!ok) continue;
        const auto rv = lookup(res, eps.date(t));
        if (!rv) continue;
        double m = 0.0;
        for (std::size_t j = 2; j <= window + 1; ++j) m += eps.value(t - j) * eps.value(t - j);
        rows.push_back(t);
        y.push_back(eps.value(t) * eps.value(t));
        ramp.push_back(intervention_ramp(t, t0_index));
        dayyear.push_back(cal.dayyear[t]);
        dayweek.push_back(cal.dayweek[t]);
        bank.push_back(cal.bank[t]);
        lag1.push_back(eps.value(t - 1) * eps.value(t - 1));
        ma.push_back(m / static_cast<double>(window));
        r.push_back(*rv);
    }
    if (rows.size() < 30) {
        throw std::invalid_argument("fit_npvar_model: too few complete days after burn-in");
    }

    const auto& k = options.knots;
    std::vector<TermSpec> terms;
    VarianceModelFit out{{}, rows, false, t0_index, DailySeries::empty_like(eps.start(), n),
                         DailySeries::empty_like(eps.start(), n), {}};
    add_smooth(terms, out.dropped_terms, "eps2_lag1", std::move(lag1), k.variance_lag);
    add_smooth(terms, out.dropped_terms, "ma_lag1", std::move(ma), k.variance_lag);
    add_smooth(terms, out.dropped_terms, "res", std::move(r), k.res);
    terms.push_back(TermSpec::smooth("dayweek", std::move(dayweek), SplineBasis::cyclic(1.0, 7.0, k.dayweek)));
    terms.push_back(TermSpec::linear("bank", std::move(bank)));
    terms.push_back(TermSpec::smooth("dayyear", std::move(dayyear), SplineBasis::cyclic(1.0, 365.0, k.dayyear)));
    if (include_intervention) {
        const std::size_t before = terms.size();
        add_smooth(terms, out.dropped_terms, "intervention", ramp, k.intervention);
        out.includes_intervention = terms.size() > before;
    }

    out.fit = fit_additive(y, terms, options.backfit);

    std::vector<double> s2(n, kNaN);
    std::vector<bool> miss(n, true);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        s2[rows[i]] = std::max(out.fit.fitted[i], options.variance_floor);
        miss[rows[i]] = false;
    }
    out.sigma2 = DailySeries(eps.start(), std::move(s2), std::move(miss));

    std::vector<double> curve(n, 0.0);
    if (out.includes_intervention) {
        const auto& h1 = out.fit.term("intervention");
        const double max_ramp = *std::max_element(ramp.begin(), ramp.end());
        const double base = h1.predict(0.0);
        std::vector<bool> cmiss(n, false);
        for (std::size_t t = 0; t < n; ++t) {
            const double x = intervention_ramp(t, t0_index);
            if (x > max_ramp) {
                cmiss[t] = true;
                continue;
            }
            curve[t] = h1.predict(x) - base;
        }
        out.intervention = DailySeries(eps.start(), std::move(curve), std::move(cmiss));
    } else {
        out.intervention = DailySeries(eps.start(), std::move(curve));
    }
    return out;
}

}  // namespace hetvol
