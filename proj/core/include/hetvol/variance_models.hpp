#pragma once

#include "hetvol/additive.hpp"
#include "hetvol/calendar.hpp"
#include "hetvol/daily_series.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace hetvol {

/// Interior knot counts per term. dayweek is a cyclic basis with one knot per weekday.
struct ModelKnots {
    int trend = 20;
    int dayyear = 20;
    int dayweek = 7;
    int lag = 10;            // p_{t-1}, p_{t-7}
    int res = 10;
    int intervention = 20;   // Int_t ramp
    int variance_lag = 10;   // eps^2_{t-1}, MA_{t-1}

    /// All counts multiplied by `factor` (rounded, at least 1). dayweek stays at 7: it has
    /// only seven distinct levels and a cyclic cubic basis needs at least five knots.
    [[nodiscard]] ModelKnots scaled(double factor) const;
};

struct MeanModelOptions {
    ModelKnots knots;
    BackfitOptions backfit;
};

/// Conditional-mean fit with smooths on trend, dayyear (cyclic), dayweek (cyclic),
/// p_{t-1}, p_{t-7} and res_t plus a linear bank-holiday dummy.
struct MeanModelFit {
    AdditiveFit fit;
    std::vector<std::size_t> rows;  // day indices into the price series used as observations
    DailySeries fitted;             // mu_t, missing outside rows
    DailySeries residuals;          // eps_t, missing outside rows
};

/// The first seven days are dropped so both lags exist; any day with a missing price,
/// lag or RES value is skipped. `cal` must cover exactly the price series span.
MeanModelFit fit_mean_model(const DailySeries& prices, const CalendarDesign& cal,
                            const DailySeries& res, const MeanModelOptions& options = {});

struct VarianceModelOptions {
    ModelKnots knots;
    BackfitOptions backfit;
    double variance_floor = 1e-6;  // EUR^2
    int ma_window = 14;
};

/// Non-parametric conditional-variance fit on eps_t^2 with smooths on the intervention ramp
/// Int_t (optional), dayyear, dayweek, eps^2_{t-1}, MA_{t-1} and res_t plus a linear bank dummy.
struct VarianceModelFit {
    AdditiveFit fit;
    std::vector<std::size_t> rows;
    bool includes_intervention = false;
    std::size_t t0_index = 0;
    DailySeries sigma2;        // floored fitted variance (EUR^2), missing outside rows
    DailySeries intervention;  // h1(Int_t) - h1(0) in EUR^2; zero when the term is absent
    std::vector<std::string> dropped_terms;  // smooths skipped because their covariate is constant
};

/// Intervention ramp: 0 up to and including t0, then days since t0.
double intervention_ramp(std::size_t t, std::size_t t0_index);

/// `eps` is the mean-model residual series on the calendar span. The first
/// ma_window + 1 days after the residuals start are burn-in for MA_{t-1}.
VarianceModelFit fit_npvar_model(const DailySeries& eps, const CalendarDesign& cal,
                                 const DailySeries& res, std::size_t t0_index,
                                 bool include_intervention,
                                 const VarianceModelOptions& options = {});

struct AnovaResult {
    double f_stat = 0.0;
    double df_num = 0.0;
    double df_den = 0.0;
    double p_value = 1.0;
};

/// Approximate F test of a reduced additive fit against a full one on the same response,
/// using effective degrees of freedom. A non-positive RSS reduction yields F = 0, p = 1;
/// otherwise edf_full <= edf_reduced throws FitError. Mismatched n throws std::invalid_argument.
AnovaResult anova_nested(const AdditiveFit& full, const AdditiveFit& reduced, std::size_t n);

}  // namespace hetvol
