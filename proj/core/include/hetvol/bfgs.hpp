#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace hetvol {

/// Objective returning f(x); fills `grad` when it is non-null.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct BfgsOptions {
    int max_iter = 1000;
    double grad_tol = 1e-6;  // max-norm of the gradient
    double rel_tol = 1e-10;  // relative change of f between iterations
};

struct BfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string status;
};

/// Unconstrained BFGS with a weak-Wolfe bisection line search.
BfgsResult minimize_bfgs(const Objective& objective, Eigen::VectorXd x0,
                         const BfgsOptions& options = {});

}  // namespace hetvol
