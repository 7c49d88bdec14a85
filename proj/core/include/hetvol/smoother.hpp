#pragma once

#include "hetvol/spline_basis.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <span>
#include <vector>

namespace hetvol {

/// Penalized spline fit of one covariate. `fitted` is centered to mean zero over the
/// training sample; `offset` is the mean that was removed.
struct SmootherFit {
    SplineBasis basis;
    Eigen::VectorXd coefficients;
    double lambda = 0.0;
    double edf = 0.0;
    std::vector<double> fitted;
    double offset = 0.0;

    /// Centered smooth evaluated at x (same centering as `fitted`).
    [[nodiscard]] double predict(double x) const;
};

struct LambdaSelection {
    double lambda = 0.0;
    std::vector<double> grid;
    std::vector<double> gcv;  // GCV score per grid point, +inf where the fit failed
    std::vector<double> edf;
};

/// 10^-4 .. 10^6 in 25 log-spaced steps.
std::vector<double> default_lambda_grid();

/// Weighted penalized least squares for a fixed covariate and basis.
///
/// Builds the design once; factorizations for a given lambda are reusable across
/// responses, which is what backfitting needs.
class PenalizedSmoother {
public:
    PenalizedSmoother(std::span<const double> x, std::span<const double> weights,
                      SplineBasis basis);

    struct Factor {
        double lambda = 0.0;
        double edf = 0.0;
        Eigen::LLT<Eigen::MatrixXd> llt;
    };

    /// Factorizes B'WB + lambda * P. Throws FitError when the system is rank-deficient
    /// and std::invalid_argument for negative lambda.
    [[nodiscard]] Factor factor(double lambda) const;

    /// Uncentered coefficients for response y.
    [[nodiscard]] Eigen::VectorXd solve(const Factor& f, std::span<const double> y) const;

    /// Uncentered fitted values B c.
    [[nodiscard]] Eigen::VectorXd evaluate(const Eigen::VectorXd& coefficients) const;

    [[nodiscard]] SmootherFit fit(std::span<const double> y, double lambda) const;
    [[nodiscard]] SmootherFit fit(std::span<const double> y, const Factor& f) const;

    /// Minimizes GCV(lambda) = n RSS / (n - edf)^2 over the grid; ties go to the larger lambda.
    [[nodiscard]] LambdaSelection select_lambda(std::span<const double> y,
                                                std::span<const double> grid) const;

    [[nodiscard]] const SplineBasis& basis() const noexcept { return basis_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(design_.rows()); }

private:
    SplineBasis basis_;
    Eigen::MatrixXd design_;
    Eigen::VectorXd weights_;
    Eigen::MatrixXd gram_;     // B'WB
    Eigen::MatrixXd penalty_;  // D'D
    double n_effective_ = 0.0;
};

SmootherFit fit_smoother(std::span<const double> x, std::span<const double> y,
                         std::span<const double> weights, double lambda, const SplineBasis& basis);

LambdaSelection select_lambda_gcv(std::span<const double> x, std::span<const double> y,
                                  std::span<const double> weights, const SplineBasis& basis,
                                  std::span<const double> lambda_grid);

}  // namespace hetvol
