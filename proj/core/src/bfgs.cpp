#include "hetvol/bfgs.hpp"

#include <cmath>
#include <limits>

namespace hetvol {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSteps = 60;

}  // namespace

BfgsResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                         const BfgsOptions& options) {
    const Eigen::Index n = x0.size();
    BfgsResult r;
    r.x = std::move(x0);
    r.grad.resize(n);
    r.f = objective(r.x, &r.grad);
    r.evaluations = 1;
    if (!std::isfinite(r.f) || !r.grad.allFinite()) {
        r.status = "objective not finite at the starting point";
        return r;
    }

    Eigen::MatrixXd h_inv = Eigen::MatrixXd::Identity(n, n);
    bool first = true;
    Eigen::VectorXd x_new(n), g_new(n);
    for (r.iterations = 0; r.iterations < options.max_iter; ++r.iterations) {
        if (r.grad.lpNorm<Eigen::Infinity>() < options.grad_tol) {
            r.converged = true;
            r.status = "gradient below tolerance";
            return r;
        }
        Eigen::VectorXd dir = -h_inv * r.grad;
        double slope = r.grad.dot(dir);
        if (!(slope < 0.0)) {
            h_inv.setIdentity();
            dir = -r.grad;
            slope = -r.grad.squaredNorm();
        }
        if (!std::isfinite(slope)) {
            r.status = "search direction not finite";
            return r;
        }
        double step = first ? std::min(1.0, 1.0 / r.grad.lpNorm<Eigen::Infinity>()) : 1.0;
        double lo = 0.0;
        double hi = std::numeric_limits<double>::infinity();
        bool accepted = false;
        double f_new = r.f;
        for (int k = 0; k < kMaxLineSteps; ++k) {
            x_new = r.x + step * dir;
            f_new = objective(x_new, &g_new);
            ++r.evaluations;
            if (!std::isfinite(f_new) || !g_new.allFinite() || f_new > r.f + kArmijo * step * slope) {
                hi = step;
            } else if (g_new.dot(dir) < kCurvature * slope) {
                lo = step;
            } else {
                accepted = true;
                break;
            }
            step = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * lo;
        }
        if (!accepted) {
            // Accept the best sufficient-decrease point found if there is one.
            if (lo > 0.0) {
                x_new = r.x + lo * dir;
                f_new = objective(x_new, &g_new);
                ++r.evaluations;
            } else {
                r.converged = r.grad.lpNorm<Eigen::Infinity>() < std::sqrt(options.grad_tol);
                r.status = "line search made no progress";
                return r;
            }
        }
        const Eigen::VectorXd s = x_new - r.x;
        const Eigen::VectorXd y = g_new - r.grad;
        const double f_old = r.f;
        r.x = x_new;
        r.f = f_new;
        r.grad = g_new;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (first) h_inv *= sy / y.squaredNorm();
            const double rho = 1.0 / sy;
            const Eigen::VectorXd hy = h_inv * y;
            h_inv += ((sy + y.dot(hy)) * rho * rho) * (s * s.transpose()) -
                     rho * (hy * s.transpose() + s * hy.transpose());
        }
        first = false;

        if (std::abs(f_old - r.f) <= options.rel_tol * std::max(1.0, std::abs(r.f))) {
            ++r.iterations;
            r.converged = true;
            r.status = "relative objective change below tolerance";
            return r;
        }
    }
    r.status = "iteration limit reached";
    return r;
}

}  // namespace hetvol
