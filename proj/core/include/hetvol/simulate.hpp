#pragma once

#include "hetvol/calendar.hpp"
#include "hetvol/daily_series.hpp"
#include "hetvol/garch_logistic.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace hetvol {

/// Ground-truth conditional-mean components. Periodic effects are low-order
/// trigonometric functions; the lag effects are linear and applied recursively.
struct MeanComponents {
    double base = 25.0;            // EUR/MWh
    double trend_amplitude = 6.0;  // half a sine wave over the sample
    double dayyear_cos = 6.0;
    double dayyear_sin2 = 3.0;
    double dayweek_amplitude = 5.0;
    double bank_coefficient = -6.0;
    double lag1 = 0.45;
    double lag7 = 0.15;
    double res_slope = 10.0;  // effect = -res_slope * log(res / res_level)

    [[nodiscard]] double trend(std::size_t t, std::size_t n_days) const;
    [[nodiscard]] double dayyear(int doy) const;
    [[nodiscard]] double dayweek(int iso_weekday) const;
    [[nodiscard]] double res_effect(double res, double res_level) const;

    /// Spectral radius of the companion matrix of the lag polynomial is below one.
    [[nodiscard]] bool stable() const;
};

/// RES generation: log-normal noise around a sinusoidal annual profile (MWh).
struct ResProcess {
    double level = 20000.0;
    double annual_amplitude = 0.3;  // relative
    double log_sd = 0.35;

    [[nodiscard]] double profile(int doy) const;
};

struct SimSpec {
    std::size_t n_days = 1461;
    Date start = make_date(2015, 1, 1);
    std::size_t t0_index = 513;  // 2016-05-28
    MeanComponents mean;
    GarchLParams garch{7.391, 0.222, 0.565, 10.171, 101.2, 0.012, 513, LogisticTime::SinceActivation};
    ResProcess res;
    std::set<Date> holidays;  // empty: Italian national holidays over the span
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument on an invalid or explosive specification.
    void validate() const;
};

struct SimResult {
    DailySeries prices;
    DailySeries res;
    CalendarDesign calendar;
    std::set<Date> holidays;
    std::vector<double> mu;
    std::vector<double> sigma2;
    std::vector<double> eps;
    std::vector<double> z;
};

/// Draws a price panel p_t = mu_t + sigma_t z_t. sigma2_0 is the pre-intervention
/// unconditional variance; the recursion then follows garchl_filter. Deterministic in the seed.
SimResult simulate(const SimSpec& spec);

struct SimPair {
    SimResult null_case;   // a = 0
    SimResult effect_case; // a = spec.garch.a
};

/// Two datasets sharing every random draw, differing only in the intervention height.
SimPair simulate_null_pair(const SimSpec& spec);

}  // namespace hetvol
