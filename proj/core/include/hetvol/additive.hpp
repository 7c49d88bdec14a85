#pragma once

#include "hetvol/smoother.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hetvol {

/// How a smooth term's lambda is chosen: by GCV over a grid on the first backfitting
/// cycle (then frozen), or fixed.
struct LambdaPolicy {
    bool use_gcv = true;
    double value = 0.0;
    std::vector<double> grid = default_lambda_grid();

    static LambdaPolicy gcv(std::vector<double> grid = default_lambda_grid()) {
        return {true, 0.0, std::move(grid)};
    }
    static LambdaPolicy fixed(double lambda) { return {false, lambda, {}}; }
};

struct TermSpec {
    enum class Kind { Smooth, Linear };

    std::string name;
    std::vector<double> covariate;
    Kind kind = Kind::Smooth;
    std::optional<SplineBasis> basis;
    LambdaPolicy lambda;

    static TermSpec smooth(std::string name, std::vector<double> covariate, SplineBasis basis,
                           LambdaPolicy lambda = {});
    static TermSpec linear(std::string name, std::vector<double> covariate);
};

struct TermFit {
    std::string name;
    TermSpec::Kind kind = TermSpec::Kind::Smooth;
    std::optional<SmootherFit> smooth;
    double coefficient = 0.0;  // linear terms only
    double edf = 0.0;          // hat-matrix trace; 1 or 0 for a linear term
    std::vector<double> contribution;

    /// Term contribution at covariate value x.
    [[nodiscard]] double predict(double x) const;
};

struct AdditiveFit {
    double intercept = 0.0;
    std::vector<TermFit> terms;
    std::vector<double> fitted;
    std::vector<double> residuals;
    double rss = 0.0;
    /// Intercept plus each smooth's edf net of its constant, plus one per active linear term.
    double total_edf = 0.0;
    bool converged = false;
    int n_iter = 0;

    [[nodiscard]] const TermFit* find(const std::string& name) const;
    [[nodiscard]] const TermFit& term(const std::string& name) const;
    [[nodiscard]] std::size_t n() const noexcept { return fitted.size(); }
};

struct BackfitOptions {
    int max_iter = 50;
    double tol = 1e-6;
};

/// Backfitting: cycles partial residuals through each term until the largest change in
/// any term's fitted values drops below `tol` or `max_iter` cycles have run.
/// Smooth contributions are centered; the intercept is the response mean minus the
/// linear terms' means.
AdditiveFit fit_additive(std::span<const double> response, const std::vector<TermSpec>& terms,
                         const BackfitOptions& options = {});

}  // namespace hetvol
