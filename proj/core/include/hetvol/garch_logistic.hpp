#pragma once

#include "hetvol/bfgs.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hetvol {

/// Time argument of the logistic intervention term.
enum class LogisticTime {
    SinceActivation,  // tau = t - t0
    Absolute,         // tau = t + 1, the 1-based day number
};

/// GARCH(1,1) with an additive logistic intervention switched on at t0:
///
///   sigma2_t = omega + alpha eps2_{t-1} + beta sigma2_{t-1} + 1{t >= t0} a / (1 + b exp(-c tau))
///
/// Variances and `a` are in EUR^2; `c` is per day. Indices are 0-based positions in the
/// residual vector.
struct GarchLParams {
    double omega = 1.0;
    double alpha = 0.1;
    double beta = 0.8;
    double a = 0.0;
    double b = 1.0;
    double c = 0.01;
    std::size_t t0_index = 0;
    LogisticTime time = LogisticTime::SinceActivation;

    static constexpr std::size_t kCount = 6;
    static constexpr std::array<const char*, kCount> kNames = {"omega", "alpha", "beta", "a", "b", "c"};

    /// omega, b, c > 0; alpha, beta >= 0; alpha + beta < 1.
    [[nodiscard]] bool admissible() const noexcept;
    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    [[nodiscard]] std::array<double, kCount> values() const noexcept { return {omega, alpha, beta, a, b, c}; }
    [[nodiscard]] GarchLParams with_values(const std::array<double, kCount>& v) const noexcept;

    /// omega / (1 - alpha - beta): the stationary variance before the intervention.
    [[nodiscard]] double pre_unconditional_variance() const;
};

/// Logistic intervention at day t (0 before t0).
double intervention_value(const GarchLParams& params, std::size_t t);

/// Conditional variance path. sigma2_0 is the sample variance of eps (or the
/// pre-intervention unconditional variance if eps has zero variance). Throws FitError
/// naming the first index where the recursion is non-finite or non-positive.
std::vector<double> garchl_filter(std::span<const double> eps, const GarchLParams& params);

/// Gaussian negative log-likelihood 0.5 sum[log 2pi + log sigma2_t + eps_t^2 / sigma2_t].
/// Returns a large finite penalty when the recursion leaves the positive region.
/// When `gradient` is non-null it receives d/d(omega, alpha, beta, a, b, c).
double neg_loglik(const GarchLParams& params, std::span<const double> eps,
                  std::array<double, GarchLParams::kCount>* gradient = nullptr);

/// Value returned by neg_loglik outside the admissible region.
inline constexpr double kLikelihoodPenalty = 1e12;

struct GarchLFitOptions {
    std::vector<GarchLParams> starts;  // empty: default grid
    LogisticTime time = LogisticTime::SinceActivation;
    BfgsOptions bfgs;
    std::uint64_t seed = 0;       // fixes the order in which starts are tried
    double hessian_step = 1e-4;   // relative central-difference step
};

struct GarchLFit {
    GarchLParams params;
    bool std_errors_available = false;  // full Hessian invertible
    std::array<bool, GarchLParams::kCount> std_error_ok{};
    std::array<double, GarchLParams::kCount> std_errors{};
    std::array<double, GarchLParams::kCount> t_stats{};
    std::array<double, GarchLParams::kCount> p_values{};
    double loglik = 0.0;
    std::vector<double> sigma2;
    bool converged = false;
    int starts_tried = 0;
    int starts_converged = 0;
    std::size_t n = 0;

    /// Two-sided test of parameter i against zero at `level`; false without a standard error for i.
    [[nodiscard]] bool significant(std::size_t i, double level = 0.05) const;
    /// sigma2 path standardized residuals eps_t / sigma_t.
    [[nodiscard]] std::vector<double> standardized(std::span<const double> eps) const;
};

/// Multi-start grid scaled by the residual variance; 48 starting points.
std::vector<GarchLParams> default_starts(std::span<const double> eps, std::size_t t0_index,
                                         LogisticTime time = LogisticTime::SinceActivation);

/// Gaussian MLE of GARCH-L on a transformed space (log omega, multinomial logit for
/// alpha and beta, log b, log c, free a). Standard errors come from the inverse of a
/// central-difference Hessian in the original parameterization; p-values are two-sided
/// Student-t with n - 6 degrees of freedom. Throws FitError if no start converges.
GarchLFit fit_garchl(std::span<const double> eps, std::size_t t0_index,
                     const GarchLFitOptions& options = {});

}  // namespace hetvol
