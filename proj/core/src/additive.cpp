#include "hetvol/additive.hpp"

#include "hetvol/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hetvol {

TermSpec TermSpec::smooth(std::string name, std::vector<double> covariate, SplineBasis basis,
                          LambdaPolicy lambda) {
    return {std::move(name), std::move(covariate), Kind::Smooth, std::move(basis), std::move(lambda)};
}

TermSpec TermSpec::linear(std::string name, std::vector<double> covariate) {
    return {std::move(name), std::move(covariate), Kind::Linear, std::nullopt, LambdaPolicy::fixed(0.0)};
}

double TermFit::predict(double x) const {
    if (kind == TermSpec::Kind::Linear) return coefficient * x;
    return smooth->predict(x);
}

const TermFit* AdditiveFit::find(const std::string& name) const {
    for (const auto& t : terms) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

const TermFit& AdditiveFit::term(const std::string& name) const {
    if (const auto* t = find(name)) return *t;
    throw std::out_of_range("no term named '" + name + "'");
}

namespace {

struct LinearState {
    double x_mean = 0.0;
    double sxx = 0.0;
};

// Start from the joint least-squares fit of every term's unpenalized linear part
// (cyclic smooths start at zero).
void linear_start(std::span<const double> response, const std::vector<TermSpec>& terms,
                  const std::vector<LinearState>& linear, AdditiveFit& fit, std::vector<double>& total) {
    const auto n = static_cast<Eigen::Index>(response.size());
    std::vector<std::size_t> cols;
    std::vector<double> means;
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto& t = terms[j];
        if (t.kind == TermSpec::Kind::Smooth && t.basis->is_cyclic()) continue;
        const double m = t.kind == TermSpec::Kind::Linear
                             ? linear[j].x_mean
                             : std::accumulate(t.covariate.begin(), t.covariate.end(), 0.0) / static_cast<double>(n);
        cols.push_back(j);
        means.push_back(m);
    }
    if (cols.empty() || n <= static_cast<Eigen::Index>(cols.size())) return;
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols.size()));
    Eigen::VectorXd y(n);
    const double y_mean = std::accumulate(response.begin(), response.end(), 0.0) / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = response[static_cast<std::size_t>(i)] - y_mean;
        for (std::size_t c = 0; c < cols.size(); ++c) {
            x(i, static_cast<Eigen::Index>(c)) = terms[cols[c]].covariate[static_cast<std::size_t>(i)] - means[c];
        }
    }
    const Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
    if (!beta.allFinite()) return;
    double linear_means = 0.0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const std::size_t j = cols[c];
        const double b = beta[static_cast<Eigen::Index>(c)];
        auto& contrib = fit.terms[j].contribution;
        const bool is_linear = terms[j].kind == TermSpec::Kind::Linear;
        if (is_linear) {
            fit.terms[j].coefficient = b;
            linear_means += b * means[c];
        }
        for (std::size_t i = 0; i < contrib.size(); ++i) {
            contrib[i] = is_linear ? b * terms[j].covariate[i] : b * (terms[j].covariate[i] - means[c]);
            total[i] += contrib[i];
        }
    }
    fit.intercept = y_mean - linear_means;
}

}  // namespace

AdditiveFit fit_additive(std::span<const double> response, const std::vector<TermSpec>& terms,
                         const BackfitOptions& options) {
    if (terms.empty()) throw std::invalid_argument("fit_additive: at least one term is required");
    if (options.max_iter < 1 || !(options.tol > 0.0)) {
        throw std::invalid_argument("fit_additive: max_iter >= 1 and tol > 0 required");
    }
    const std::size_t n = response.size();
    std::set<std::string> names;
    for (const auto& t : terms) {
        if (!names.insert(t.name).second) {
            throw std::invalid_argument("fit_additive: duplicate term name '" + t.name + "'");
        }
        if (t.covariate.size() != n) {
            throw std::invalid_argument("fit_additive: covariate '" + t.name +
                                        "' length differs from the response");
        }
        if (t.kind == TermSpec::Kind::Smooth && !t.basis) {
            throw std::invalid_argument("fit_additive: smooth term '" + t.name + "' has no basis");
        }
    }
    for (double y : response) {
        if (!std::isfinite(y)) throw std::invalid_argument("fit_additive: non-finite response");
    }

    const std::vector<double> unit_weights(n, 1.0);
    std::vector<std::optional<PenalizedSmoother>> smoothers(terms.size());
    std::vector<std::optional<PenalizedSmoother::Factor>> factors(terms.size());
    std::vector<LinearState> linear(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const auto& t = terms[j];
        if (t.kind == TermSpec::Kind::Smooth) {
            smoothers[j].emplace(t.covariate, unit_weights, *t.basis);
            if (!t.lambda.use_gcv) factors[j] = smoothers[j]->factor(t.lambda.value);
        } else {
            double m = 0.0;
            for (double v : t.covariate) m += v;
            m /= static_cast<double>(n);
            double sxx = 0.0;
            for (double v : t.covariate) sxx += (v - m) * (v - m);
            linear[j] = {m, sxx};
        }
    }

    AdditiveFit fit;
    fit.terms.resize(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        fit.terms[j].name = terms[j].name;
        fit.terms[j].kind = terms[j].kind;
        fit.terms[j].contribution.assign(n, 0.0);
    }
    const double y_mean = std::accumulate(response.begin(), response.end(), 0.0) / static_cast<double>(n);
    fit.intercept = y_mean;

    std::vector<double> total(n, 0.0);  // sum of all term contributions
    linear_start(response, terms, linear, fit, total);
    std::vector<double> partial(n);
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < terms.size(); ++j) {
            auto& tf = fit.terms[j];
            for (std::size_t i = 0; i < n; ++i) {
                partial[i] = response[i] - fit.intercept - (total[i] - tf.contribution[i]);
            }
            std::vector<double> next(n);
            if (terms[j].kind == TermSpec::Kind::Smooth) {
                if (!factors[j]) {
                    const auto sel = smoothers[j]->select_lambda(partial, terms[j].lambda.grid);
                    factors[j] = smoothers[j]->factor(sel.lambda);
                }
                tf.smooth = smoothers[j]->fit(partial, *factors[j]);
                tf.edf = tf.smooth->edf;
                next = tf.smooth->fitted;
            } else {
                const auto& ls = linear[j];
                double sxy = 0.0;
                for (std::size_t i = 0; i < n; ++i) sxy += (terms[j].covariate[i] - ls.x_mean) * partial[i];
                tf.coefficient = ls.sxx > 0.0 ? sxy / ls.sxx : 0.0;
                tf.edf = ls.sxx > 0.0 ? 1.0 : 0.0;
                for (std::size_t i = 0; i < n; ++i) next[i] = tf.coefficient * terms[j].covariate[i];
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(next[i])) {
                    throw FitError("backfitting diverged at iteration " + std::to_string(iter) +
                                   " in term '" + terms[j].name + "'");
                }
                max_change = std::max(max_change, std::abs(next[i] - tf.contribution[i]));
                total[i] += next[i] - tf.contribution[i];
            }
            tf.contribution = std::move(next);

            double linear_means = 0.0;
            for (std::size_t k = 0; k < terms.size(); ++k) {
                if (terms[k].kind == TermSpec::Kind::Linear) {
                    linear_means += fit.terms[k].coefficient * linear[k].x_mean;
                }
            }
            fit.intercept = y_mean - linear_means;
        }
        fit.n_iter = iter;
        if (max_change < options.tol) {
            fit.converged = true;
            break;
        }
    }

    fit.fitted.resize(n);
    fit.residuals.resize(n);
    fit.rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = fit.intercept;
        for (const auto& t : fit.terms) f += t.contribution[i];
        fit.fitted[i] = f;
        fit.residuals[i] = response[i] - f;
        fit.rss += fit.residuals[i] * fit.residuals[i];
    }
    fit.total_edf = 1.0;
    for (const auto& t : fit.terms) {
        fit.total_edf += t.kind == TermSpec::Kind::Smooth ? t.edf - 1.0 : t.edf;
    }
    return fit;
}

}  // namespace hetvol
