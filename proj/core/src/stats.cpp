#include "hetvol/stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hetvol {

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of empty range");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("sample variance needs at least two values");
    // Shifted by the first value: exact zero for constant data.
    const double shift = x.front();
    double sum = 0.0;
    for (double v : x) sum += v - shift;
    const double m = sum / static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - shift - m) * (v - shift - m);
    return ss / static_cast<double>(x.size() - 1);
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("pearson_correlation: need two equal-length ranges");
    }
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) {
        throw std::invalid_argument("pearson_correlation: zero variance");
    }
    return sxy / std::sqrt(sxx * syy);
}

DailySeries rolling_variance(const DailySeries& series, std::size_t window) {
    if (window < 2) {
        throw std::invalid_argument("rolling_variance: window must be at least 2");
    }
    if (window > series.size()) {
        throw std::invalid_argument("rolling_variance: window " + std::to_string(window) +
                                    " larger than series length " +
                                    std::to_string(series.size()));
    }
    if (series.count_present() < window) {
        throw std::invalid_argument("rolling_variance: fewer present values than the window");
    }
    const std::size_t n = series.size();
    std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
    std::vector<bool> missing(n, true);
    const auto v = series.values();
    for (std::size_t t = window - 1; t < n; ++t) {
        const std::size_t lo = t + 1 - window;
        bool gap = false;
        for (std::size_t i = lo; i <= t && !gap; ++i) gap = series.missing(i);
        if (gap) continue;
        out[t] = sample_variance(v.subspan(lo, window));
        missing[t] = false;
    }
    return DailySeries(series.start(), std::move(out), std::move(missing));
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
    const std::size_t n = x.size();
    if (max_lag >= n) {
        throw std::invalid_argument("acf: max_lag must be smaller than the series length");
    }
    const double m = mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    if (!(c0 > 0.0)) {
        throw std::invalid_argument("acf: zero-variance series, correlation undefined");
    }
    std::vector<double> rho(max_lag + 1);
    rho[0] = 1.0;
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double ck = 0.0;
        for (std::size_t t = k; t < n; ++t) ck += (x[t] - m) * (x[t - k] - m);
        rho[k] = ck / c0;
    }
    return rho;
}

std::vector<double> acf(const DailySeries& series, std::size_t max_lag) {
    if (!series.complete()) {
        throw std::invalid_argument("acf: series has missing values over the evaluation span");
    }
    return acf(series.values(), max_lag);
}

}  // namespace hetvol
