#include "hetvol/garch_logistic.hpp"

#include "hetvol/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace hetvol {

namespace {

constexpr std::size_t kP = GarchLParams::kCount;
using Vec6 = std::array<double, kP>;

double seed_variance(std::span<const double> eps, const GarchLParams& p) {
    if (eps.size() >= 2) {
        const double m = std::accumulate(eps.begin(), eps.end(), 0.0) / static_cast<double>(eps.size());
        double ss = 0.0;
        for (double e : eps) ss += (e - m) * (e - m);
        const double v = ss / static_cast<double>(eps.size() - 1);
        if (v > 0.0) return v;
    }
    return p.pre_unconditional_variance();
}

struct LogisticParts {
    double value = 0.0;
    double d_a = 0.0;
    double d_b = 0.0;
    double d_c = 0.0;
};

LogisticParts logistic_parts(const GarchLParams& p, std::size_t t) {
    if (t < p.t0_index) return {};
    const double tau = p.time == LogisticTime::SinceActivation ? static_cast<double>(t - p.t0_index)
                                                               : static_cast<double>(t + 1);
    const double e = std::exp(-p.c * tau);
    const double den = 1.0 + p.b * e;
    LogisticParts out;
    out.d_a = 1.0 / den;
    out.value = p.a * out.d_a;
    out.d_b = -p.a * (e / den) / den;
    out.d_c = p.a * tau * (p.b * e / den) / den;
    return out;
}

}  // namespace

bool GarchLParams::admissible() const noexcept {
    return std::isfinite(omega) && std::isfinite(b) && std::isfinite(c) && std::isfinite(a) &&
           omega > 0.0 && alpha >= 0.0 && beta >= 0.0 && alpha + beta < 1.0 && b > 0.0 && c > 0.0;
}

void GarchLParams::validate() const {
    if (!(omega > 0.0)) throw std::invalid_argument("GARCH-L: omega must be positive");
    if (!(alpha >= 0.0) || !(beta >= 0.0)) {
        throw std::invalid_argument("GARCH-L: alpha and beta must be non-negative");
    }
    if (!(alpha + beta < 1.0)) throw std::invalid_argument("GARCH-L: alpha + beta must be < 1");
    if (!(b > 0.0) || !(c > 0.0)) throw std::invalid_argument("GARCH-L: b and c must be positive");
    if (!std::isfinite(a)) throw std::invalid_argument("GARCH-L: a must be finite");
}

GarchLParams GarchLParams::with_values(const std::array<double, kCount>& v) const noexcept {
    GarchLParams p = *this;
    p.omega = v[0];
    p.alpha = v[1];
    p.beta = v[2];
    p.a = v[3];
    p.b = v[4];
    p.c = v[5];
    return p;
}

double GarchLParams::pre_unconditional_variance() const {
    if (!(alpha + beta < 1.0)) throw std::invalid_argument("GARCH-L: non-stationary parameters");
    return omega / (1.0 - alpha - beta);
}

double intervention_value(const GarchLParams& params, std::size_t t) {
    return logistic_parts(params, t).value;
}

std::vector<double> garchl_filter(std::span<const double> eps, const GarchLParams& params) {
    params.validate();
    if (eps.empty()) throw std::invalid_argument("garchl_filter: empty residual vector");
    std::vector<double> s2(eps.size());
    s2[0] = seed_variance(eps, params);
    for (std::size_t t = 0; t < eps.size(); ++t) {
        if (!std::isfinite(eps[t])) {
            throw FitError("garchl_filter: non-finite residual at index " + std::to_string(t));
        }
        if (t > 0) {
            s2[t] = params.omega + params.alpha * eps[t - 1] * eps[t - 1] + params.beta * s2[t - 1] +
                    intervention_value(params, t);
        }
        if (!std::isfinite(s2[t]) || !(s2[t] > 0.0)) {
            throw FitError("garchl_filter: conditional variance not finite and positive at index " +
                           std::to_string(t));
        }
    }
    return s2;
}

double neg_loglik(const GarchLParams& p, std::span<const double> eps, Vec6* gradient) {
    if (gradient) gradient->fill(0.0);
    if (!p.admissible() || eps.empty()) return kLikelihoodPenalty;
    const double log2pi = std::log(2.0 * std::numbers::pi);

    // sigma2_0 and its derivative (non-zero only on the zero-variance fallback).
    Vec6 ds{};
    double s2 = seed_variance(eps, p);
    bool seeded_from_model = true;
    if (eps.size() >= 2) {
        const double m = std::accumulate(eps.begin(), eps.end(), 0.0) / static_cast<double>(eps.size());
        double ss = 0.0;
        for (double e : eps) ss += (e - m) * (e - m);
        seeded_from_model = !(ss > 0.0);
    }
    if (seeded_from_model) {
        const double d = 1.0 - p.alpha - p.beta;
        ds[0] = 1.0 / d;
        ds[1] = p.omega / (d * d);
        ds[2] = ds[1];
    }

    double nll = 0.0;
    Vec6 grad{};
    for (std::size_t t = 0; t < eps.size(); ++t) {
        if (t > 0) {
            const double e2 = eps[t - 1] * eps[t - 1];
            const double prev = s2;
            const LogisticParts lp = logistic_parts(p, t);
            s2 = p.omega + p.alpha * e2 + p.beta * prev + lp.value;
            if (gradient) {
                ds = {1.0 + p.beta * ds[0], e2 + p.beta * ds[1], prev + p.beta * ds[2],
                      lp.d_a + p.beta * ds[3], lp.d_b + p.beta * ds[4], lp.d_c + p.beta * ds[5]};
            }
        }
        if (!(s2 > 0.0) || !std::isfinite(s2)) {
            if (gradient) gradient->fill(0.0);
            return kLikelihoodPenalty;
        }
        const double e2 = eps[t] * eps[t];
        nll += 0.5 * (log2pi + std::log(s2) + e2 / s2);
        if (gradient) {
            const double w = 0.5 * (1.0 / s2 - e2 / (s2 * s2));
            for (std::size_t k = 0; k < kP; ++k) grad[k] += w * ds[k];
        }
    }
    const bool grad_ok = !gradient || std::all_of(grad.begin(), grad.end(), [](double v) { return std::isfinite(v); });
    if (!std::isfinite(nll) || !grad_ok) {
        if (gradient) gradient->fill(0.0);
        return kLikelihoodPenalty;
    }
    if (gradient) *gradient = grad;
    return nll;
}

bool GarchLFit::significant(std::size_t i, double level) const {
    return std_error_ok.at(i) && p_values.at(i) < level;
}

std::vector<double> GarchLFit::standardized(std::span<const double> eps) const {
    if (eps.size() != sigma2.size()) throw std::invalid_argument("standardized: length mismatch");
    std::vector<double> z(eps.size());
    for (std::size_t t = 0; t < eps.size(); ++t) z[t] = eps[t] / std::sqrt(sigma2[t]);
    return z;
}

std::vector<GarchLParams> default_starts(std::span<const double> eps, std::size_t t0_index,
                                         LogisticTime time) {
    GarchLParams proto;
    proto.t0_index = t0_index;
    proto.time = time;
    proto.omega = 1.0;
    proto.alpha = 0.1;
    proto.beta = 0.8;
    const double var = seed_variance(eps, proto);
    std::vector<GarchLParams> out;
    for (double w : {0.5, 5.0}) {
        for (const auto& [al, be] : {std::pair{0.1, 0.8}, std::pair{0.2, 0.6}}) {
            for (double a : {0.0, 0.3, -0.3}) {
                for (double b : {10.0, 100.0}) {
                    for (double c : {0.005, 0.05}) {
                        GarchLParams p = proto;
                        p.omega = w * var;
                        p.alpha = al;
                        p.beta = be;
                        p.a = a * var;
                        p.b = b;
                        p.c = c;
                        out.push_back(p);
                    }
                }
            }
        }
    }
    return out;
}

namespace {

// Unconstrained coordinates u <-> GARCH-L parameters.
struct Transform {
    double a_scale = 1.0;

    [[nodiscard]] Eigen::VectorXd to_u(const GarchLParams& p) const {
        const double rest = 1.0 - p.alpha - p.beta;
        const double al = std::max(p.alpha, 1e-8);
        const double be = std::max(p.beta, 1e-8);
        Eigen::VectorXd u(6);
        u << std::log(p.omega), std::log(al / rest), std::log(be / rest), p.a / a_scale,
            std::log(p.b), std::log(p.c);
        return u;
    }

    [[nodiscard]] GarchLParams from_u(const Eigen::VectorXd& u, const GarchLParams& proto) const {
        GarchLParams p = proto;
        const double m = std::max({0.0, u[1], u[2]});
        const double e0 = std::exp(-m), e1 = std::exp(u[1] - m), e2 = std::exp(u[2] - m);
        const double den = e0 + e1 + e2;
        p.omega = std::exp(u[0]);
        p.alpha = e1 / den;
        p.beta = e2 / den;
        p.a = u[3] * a_scale;
        p.b = std::exp(u[4]);
        p.c = std::exp(u[5]);
        return p;
    }

    /// Chain rule: gradient in u from the gradient in the original parameters.
    [[nodiscard]] Eigen::VectorXd pull_back(const GarchLParams& p, const Vec6& g) const {
        Eigen::VectorXd out(6);
        out[0] = g[0] * p.omega;
        out[1] = g[1] * p.alpha * (1.0 - p.alpha) - g[2] * p.alpha * p.beta;
        out[2] = -g[1] * p.alpha * p.beta + g[2] * p.beta * (1.0 - p.beta);
        out[3] = g[3] * a_scale;
        out[4] = g[4] * p.b;
        out[5] = g[5] * p.c;
        return out;
    }
};

struct StdErrors {
    bool full = false;
    std::array<bool, kP> ok{};
    Vec6 se{};
};

// Covariance of the leading `k` parameters from the Hessian block, or nullopt.
std::optional<Eigen::VectorXd> inverse_diagonal(const Eigen::MatrixXd& h, const Vec6& theta, Eigen::Index k) {
    const Eigen::MatrixXd block = h.topLeftCorner(k, k);
    Eigen::VectorXd d(k);
    for (Eigen::Index i = 0; i < k; ++i) d[i] = std::max(std::abs(theta[static_cast<std::size_t>(i)]), 1e-3);
    // Equilibrate before inverting; b can sit many orders of magnitude above the rest.
    const Eigen::MatrixXd scaled = d.asDiagonal() * block * d.asDiagonal();
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(scaled);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd diag = (d.asDiagonal() * lu.inverse() * d.asDiagonal()).diagonal();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (!(diag[i] > 0.0) || !std::isfinite(diag[i])) return std::nullopt;
    }
    return diag;
}

StdErrors hessian_std_errors(const GarchLParams& p, std::span<const double> eps, double rel_step) {
    const Vec6 theta = p.values();
    Eigen::MatrixXd h(6, 6);
    std::array<bool, kP> column_ok{};
    for (std::size_t j = 0; j < kP; ++j) {
        const double step = rel_step * std::max(std::abs(theta[j]), 1e-3);
        Vec6 up = theta, down = theta;
        up[j] += step;
        down[j] -= step;
        Vec6 g_up{}, g_down{};
        const double f_up = neg_loglik(p.with_values(up), eps, &g_up);
        const double f_down = neg_loglik(p.with_values(down), eps, &g_down);
        column_ok[j] = f_up < kLikelihoodPenalty && f_down < kLikelihoodPenalty;
        for (std::size_t i = 0; i < kP; ++i) {
            h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (g_up[i] - g_down[i]) / (2.0 * step);
        }
    }
    const Eigen::MatrixXd sym = 0.5 * (h + h.transpose());
    StdErrors out;
    const auto take = [&](const Eigen::VectorXd& diag) {
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            out.ok[static_cast<std::size_t>(i)] = true;
            out.se[static_cast<std::size_t>(i)] = std::sqrt(diag[i]);
        }
    };
    const bool all_columns = std::all_of(column_ok.begin(), column_ok.end(), [](bool b) { return b; });
    if (all_columns && sym.allFinite()) {
        if (auto diag = inverse_diagonal(sym, theta, 6)) {
            out.full = true;
            take(*diag);
            return out;
        }
    }
    // Shape parameters at a boundary (step-like logistic): condition on b and c.
    const bool leading_ok = std::all_of(column_ok.begin(), column_ok.begin() + 4, [](bool b) { return b; });
    const Eigen::MatrixXd lead = sym.topLeftCorner(4, 4);
    if (leading_ok && lead.allFinite()) {
        if (auto diag = inverse_diagonal(sym, theta, 4)) take(*diag);
    }
    return out;
}

}  // namespace

GarchLFit fit_garchl(std::span<const double> eps, std::size_t t0_index,
                     const GarchLFitOptions& options) {
    if (eps.size() < 10) throw std::invalid_argument("fit_garchl: too few residuals");
    if (t0_index == 0 || t0_index >= eps.size()) {
        throw std::invalid_argument("fit_garchl: t0 must fall strictly inside the sample");
    }
    for (std::size_t t = 0; t < eps.size(); ++t) {
        if (!std::isfinite(eps[t])) {
            throw std::invalid_argument("fit_garchl: non-finite residual at index " + std::to_string(t));
        }
    }
    std::vector<GarchLParams> starts =
        options.starts.empty() ? default_starts(eps, t0_index, options.time) : options.starts;
    for (auto& s : starts) {
        s.t0_index = t0_index;
        s.time = options.time;
        s.validate();
    }
    std::mt19937_64 rng(options.seed);
    std::shuffle(starts.begin(), starts.end(), rng);

    GarchLParams proto = starts.front();
    Transform tr;
    tr.a_scale = std::max(seed_variance(eps, proto), 1e-12);

    GarchLFit fit;
    fit.n = eps.size();
    std::optional<BfgsResult> best;
    std::ostringstream diag;
    for (const auto& start : starts) {
        const Objective objective = [&](const Eigen::VectorXd& u, Eigen::VectorXd* grad) {
            const GarchLParams p = tr.from_u(u, proto);
            Vec6 g{};
            const double f = neg_loglik(p, eps, grad ? &g : nullptr);
            if (grad) *grad = tr.pull_back(p, g);
            return f;
        };
        BfgsResult r = minimize_bfgs(objective, tr.to_u(start), options.bfgs);
        ++fit.starts_tried;
        if (!r.converged || r.f >= kLikelihoodPenalty) {
            diag << "start " << fit.starts_tried << ": " << r.status << " (nll " << r.f << "); ";
            continue;
        }
        ++fit.starts_converged;
        if (!best || r.f < best->f) best = std::move(r);
    }
    if (!best) {
        throw FitError("fit_garchl: no start converged: " + diag.str());
    }

    fit.params = tr.from_u(best->x, proto);
    fit.converged = true;
    fit.loglik = -neg_loglik(fit.params, eps);
    fit.sigma2 = garchl_filter(eps, fit.params);

    const StdErrors se = hessian_std_errors(fit.params, eps, options.hessian_step);
    fit.std_errors_available = se.full;
    fit.std_error_ok = se.ok;
    const Vec6 theta = fit.params.values();
    const double df = static_cast<double>(eps.size()) - static_cast<double>(kP);
    const boost::math::students_t tdist(df);
    for (std::size_t i = 0; i < kP; ++i) {
        if (se.ok[i]) {
            fit.std_errors[i] = se.se[i];
            fit.t_stats[i] = theta[i] / se.se[i];
            fit.p_values[i] = std::clamp(
                2.0 * boost::math::cdf(boost::math::complement(tdist, std::abs(fit.t_stats[i]))), 0.0, 1.0);
        } else {
            fit.std_errors[i] = 0.0;
            fit.t_stats[i] = 0.0;
            fit.p_values[i] = 1.0;
        }
    }
    return fit;
}

}  // namespace hetvol
