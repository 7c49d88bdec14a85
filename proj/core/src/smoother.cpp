#include "hetvol/smoother.hpp"

#include "hetvol/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hetvol {

double SmootherFit::predict(double x) const {
    return basis.row(x).dot(coefficients) - offset;
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 25; ++i) grid.push_back(std::pow(10.0, -4.0 + 10.0 * i / 24.0));
    return grid;
}

PenalizedSmoother::PenalizedSmoother(std::span<const double> x, std::span<const double> weights,
                                     SplineBasis basis)
    : basis_(std::move(basis)) {
    if (x.size() != weights.size()) {
        throw std::invalid_argument("smoother: x and weights differ in length");
    }
    if (x.size() < basis_.size()) {
        throw std::invalid_argument("smoother: fewer observations (" + std::to_string(x.size()) +
                                    ") than basis functions (" + std::to_string(basis_.size()) + ")");
    }
    weights_.resize(static_cast<Eigen::Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] >= 0.0) || !std::isfinite(x[i])) {
            throw std::invalid_argument("smoother: weights must be non-negative and x finite");
        }
        weights_[static_cast<Eigen::Index>(i)] = weights[i];
        if (weights[i] > 0.0) n_effective_ += 1.0;
    }
    design_ = basis_.design(x);
    gram_ = design_.transpose() * weights_.asDiagonal() * design_;
    penalty_ = basis_.penalty();
}

PenalizedSmoother::Factor PenalizedSmoother::factor(double lambda) const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("smoothing parameter must be finite and >= 0");
    }
    Factor f;
    f.lambda = lambda;
    const Eigen::MatrixXd system = gram_ + lambda * penalty_;
    f.llt.compute(system);
    if (f.llt.info() != Eigen::Success || !(f.llt.rcond() > 1e-13)) {
        throw FitError("rank-deficient penalized system for " + basis_.describe() +
                       " at lambda = " + std::to_string(lambda));
    }
    f.edf = f.llt.solve(gram_).trace();
    return f;
}

Eigen::VectorXd PenalizedSmoother::solve(const Factor& f, std::span<const double> y) const {
    if (y.size() != n()) throw std::invalid_argument("smoother: response length mismatch");
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    return f.llt.solve(design_.transpose() * weights_.cwiseProduct(yv));
}

Eigen::VectorXd PenalizedSmoother::evaluate(const Eigen::VectorXd& coefficients) const {
    return design_ * coefficients;
}

SmootherFit PenalizedSmoother::fit(std::span<const double> y, double lambda) const {
    return fit(y, factor(lambda));
}

SmootherFit PenalizedSmoother::fit(std::span<const double> y, const Factor& f) const {
    SmootherFit out{basis_, solve(f, y), f.lambda, f.edf, {}, 0.0};
    const Eigen::VectorXd raw = evaluate(out.coefficients);
    out.offset = raw.mean();
    out.fitted.resize(raw.size());
    for (Eigen::Index i = 0; i < raw.size(); ++i) out.fitted[static_cast<std::size_t>(i)] = raw[i] - out.offset;
    return out;
}

LambdaSelection PenalizedSmoother::select_lambda(std::span<const double> y,
                                                 std::span<const double> grid) const {
    if (grid.empty()) throw std::invalid_argument("lambda grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) {
        throw std::invalid_argument("lambda grid must be ascending");
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    LambdaSelection sel;
    sel.grid.assign(grid.begin(), grid.end());
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double lambda : grid) {
        double score = std::numeric_limits<double>::infinity();
        double edf = std::numeric_limits<double>::quiet_NaN();
        try {
            const Factor f = factor(lambda);
            const Eigen::VectorXd resid = yv - evaluate(solve(f, y));
            const double rss = resid.cwiseProduct(resid).dot(weights_);
            edf = f.edf;
            const double denom = n_effective_ - edf;
            if (denom > 0.0) score = n_effective_ * rss / (denom * denom);
        } catch (const FitError&) {
        }
        sel.gcv.push_back(score);
        sel.edf.push_back(edf);
        if (std::isfinite(score) && score <= best) {
            best = score;
            sel.lambda = lambda;
            found = true;
        }
    }
    if (!found) {
        throw FitError("GCV scores are all non-finite for " + basis_.describe());
    }
    return sel;
}

SmootherFit fit_smoother(std::span<const double> x, std::span<const double> y,
                         std::span<const double> weights, double lambda, const SplineBasis& basis) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_smoother: x and y differ in length");
    return PenalizedSmoother(x, weights, basis).fit(y, lambda);
}

LambdaSelection select_lambda_gcv(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> weights, const SplineBasis& basis,
                                  std::span<const double> lambda_grid) {
    if (x.size() != y.size()) throw std::invalid_argument("select_lambda_gcv: length mismatch");
    return PenalizedSmoother(x, weights, basis).select_lambda(y, lambda_grid);
}

}  // namespace hetvol
