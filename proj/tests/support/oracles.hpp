#pragma once

#include "hetvol/garch_logistic.hpp"
#include "hetvol/spline_basis.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace oracle {

// Direct transcription of the GARCH-L recursion, written without any library helper.
inline std::vector<double> garchl_sigma2(std::span<const double> eps, double omega, double alpha,
                                         double beta, double a, double b, double c, std::size_t t0,
                                         bool since_activation = true) {
    const std::size_t n = eps.size();
    double m = 0.0;
    for (double e : eps) m += e;
    m /= static_cast<double>(n);
    double ss = 0.0;
    for (double e : eps) ss += (e - m) * (e - m);
    double var = ss / static_cast<double>(n - 1);
    if (!(var > 0.0)) var = omega / (1.0 - alpha - beta);

    std::vector<double> s2(n);
    s2[0] = var;
    for (std::size_t t = 1; t < n; ++t) {
        double g = 0.0;
        if (t >= t0) {
            const double tau = since_activation ? double(t) - double(t0) : double(t) + 1.0;
            g = a / (1.0 + b * std::exp(-c * tau));
        }
        s2[t] = omega + alpha * eps[t - 1] * eps[t - 1] + beta * s2[t - 1] + g;
    }
    return s2;
}

inline double garchl_nll(std::span<const double> eps, const std::vector<double>& s2) {
    double sum = 0.0;
    for (std::size_t t = 0; t < eps.size(); ++t) {
        sum += std::log(2.0 * std::numbers::pi) + std::log(s2[t]) + eps[t] * eps[t] / s2[t];
    }
    return 0.5 * sum;
}

inline double garchl_nll(std::span<const double> eps, const hetvol::GarchLParams& p) {
    return garchl_nll(eps, garchl_sigma2(eps, p.omega, p.alpha, p.beta, p.a, p.b, p.c, p.t0_index,
                                         p.time == hetvol::LogisticTime::SinceActivation));
}

// Plain GARCH(1,1) likelihood, no intervention term.
inline double garch11_nll(std::span<const double> eps, double omega, double alpha, double beta) {
    return garchl_nll(eps, garchl_sigma2(eps, omega, alpha, beta, 0.0, 1.0, 1.0, eps.size()));
}

// Fitted values of y ~ 1 + B1 c1 + B2 c2 with penalty l1 c1'P1 c1 + l2 c2'P2 c2, solved in one
// stacked system. Fitted values are unique even though the coefficients are not.
inline Eigen::VectorXd joint_pls_fit(const Eigen::VectorXd& y, const Eigen::MatrixXd& b1,
                                     const Eigen::MatrixXd& p1, double l1, const Eigen::MatrixXd& b2,
                                     const Eigen::MatrixXd& p2, double l2) {
    const Eigen::Index n = y.size();
    const Eigen::Index k1 = b1.cols();
    const Eigen::Index k2 = b2.cols();
    Eigen::MatrixXd x(n, 1 + k1 + k2);
    x.col(0).setOnes();
    x.middleCols(1, k1) = b1;
    x.middleCols(1 + k1, k2) = b2;
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(1 + k1 + k2, 1 + k1 + k2);
    s.block(1, 1, k1, k1) = l1 * p1;
    s.block(1 + k1, 1 + k1, k2, k2) = l2 * p2;
    const Eigen::MatrixXd lhs = x.transpose() * x + s;
    const Eigen::VectorXd rhs = x.transpose() * y;
    const Eigen::VectorXd coef = lhs.completeOrthogonalDecomposition().solve(rhs);
    return x * coef;
}

inline std::vector<double> normal_draws(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = z(rng);
    return out;
}

}  // namespace oracle
