#include "hetvol/simulate.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace hetvol {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double MeanComponents::trend(std::size_t t, std::size_t n_days) const {
    return trend_amplitude * std::sin(std::numbers::pi * static_cast<double>(t) / static_cast<double>(n_days));
}

double MeanComponents::dayyear(int doy) const {
    const double x = kTwoPi * (doy - 1) / 365.0;
    return dayyear_cos * std::cos(x) + dayyear_sin2 * std::sin(2.0 * x);
}

double MeanComponents::dayweek(int iso_weekday) const {
    // Peaks mid-week, trough at the weekend.
    return dayweek_amplitude * std::cos(kTwoPi * (iso_weekday - 3) / 7.0);
}

double MeanComponents::res_effect(double res, double res_level) const {
    return -res_slope * std::log(res / res_level);
}

bool MeanComponents::stable() const {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(7, 7);
    companion(0, 0) = lag1;
    companion(0, 6) = lag7;
    for (int i = 1; i < 7; ++i) companion(i, i - 1) = 1.0;
    const Eigen::VectorXcd ev = companion.eigenvalues();
    return ev.cwiseAbs().maxCoeff() < 1.0;
}

double ResProcess::profile(int doy) const {
    return level * (1.0 + annual_amplitude * std::sin(kTwoPi * (doy - 1) / 365.0));
}

void SimSpec::validate() const {
    if (n_days < 130) throw std::invalid_argument("SimSpec: n_days too small");
    if (!(t0_index > 60 && t0_index + 60 < n_days)) {
        throw std::invalid_argument("SimSpec: t0 must lie in (60, n_days - 60)");
    }
    garch.validate();
    if (!mean.stable()) {
        throw std::invalid_argument("SimSpec: explosive lag coefficients (lag1 = " +
                                    std::to_string(mean.lag1) + ", lag7 = " +
                                    std::to_string(mean.lag7) + ")");
    }
    if (!(res.level > 0.0) || !(res.log_sd >= 0.0) || !(std::abs(res.annual_amplitude) < 1.0)) {
        throw std::invalid_argument("SimSpec: invalid RES process");
    }
}

SimResult simulate(const SimSpec& spec) {
    spec.validate();
    const std::size_t n = spec.n_days;
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(n), res_noise(n);
    for (auto& v : z) v = normal(rng);
    for (auto& v : res_noise) v = normal(rng);

    std::set<Date> holidays = spec.holidays;
    if (holidays.empty()) {
        holidays = italian_holidays(year_of(spec.start),
                                    year_of(add_days(spec.start, static_cast<long>(n) - 1)));
    }
    CalendarDesign cal = build_calendar(spec.start, n, holidays);

    GarchLParams g = spec.garch;
    g.t0_index = spec.t0_index;
    std::vector<double> sigma2(n), eps(n), mu(n), price(n), res(n);
    const double s = spec.res.log_sd;
    for (std::size_t t = 0; t < n; ++t) {
        res[t] = spec.res.profile(cal.dayyear[t]) * std::exp(s * res_noise[t] - 0.5 * s * s);
    }

    const auto& m = spec.mean;
    const double steady = m.base / (1.0 - m.lag1 - m.lag7);
    for (std::size_t t = 0; t < n; ++t) {
        sigma2[t] = t == 0 ? g.pre_unconditional_variance()
                           : g.omega + g.alpha * eps[t - 1] * eps[t - 1] + g.beta * sigma2[t - 1] +
                                 intervention_value(g, t);
        eps[t] = std::sqrt(sigma2[t]) * z[t];
        const double p1 = t >= 1 ? price[t - 1] : steady;
        const double p7 = t >= 7 ? price[t - 7] : steady;
        mu[t] = m.base + m.trend(t, n) + m.dayyear(cal.dayyear[t]) + m.dayweek(cal.dayweek[t]) +
                m.bank_coefficient * cal.bank[t] + m.lag1 * p1 + m.lag7 * p7 +
                m.res_effect(res[t], spec.res.level);
        price[t] = mu[t] + eps[t];
    }

    return SimResult{DailySeries(spec.start, price), DailySeries(spec.start, res), std::move(cal),
                     std::move(holidays), std::move(mu), std::move(sigma2), std::move(eps), std::move(z)};
}

SimPair simulate_null_pair(const SimSpec& spec) {
    SimSpec null_spec = spec;
    null_spec.garch.a = 0.0;
    return {simulate(null_spec), simulate(spec)};
}

}  // namespace hetvol
