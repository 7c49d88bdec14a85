#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace hetvol {

/// B-spline basis with a difference penalty on adjacent coefficients (P-spline).
///
/// Open bases store the full knot vector, boundary extension included, and have
/// `knots.size() - degree - 1` functions supported on [knots[degree], knots[size()]].
/// Cyclic bases store one period of knots in [knots[0], knots[0] + period) and have
/// one function per knot; evaluation wraps modulo the period and the penalty wraps too,
/// so only constants lie in its null space.
class SplineBasis {
public:
    /// Open basis from a full, non-decreasing knot vector.
    static SplineBasis open(std::vector<double> knots, int degree = 3, int penalty_order = 2);

    /// Equally spaced open basis on [lo, hi] with `n_interior` interior knots; boundary
    /// knots keep the same spacing so that polynomials of degree < penalty_order are
    /// unpenalized.
    static SplineBasis uniform(double lo, double hi, int n_interior, int degree = 3,
                               int penalty_order = 2);

    /// Uniform basis spanning the range of `x`.
    static SplineBasis uniform_for(std::span<const double> x, int n_interior, int degree = 3,
                                   int penalty_order = 2);

    /// Cyclic basis with `n_knots` equally spaced knots starting at `start`.
    static SplineBasis cyclic(double start, double period, int n_knots, int degree = 3,
                              int penalty_order = 2);

    /// Cyclic basis with explicit knots inside one period starting at knots.front().
    static SplineBasis cyclic(std::vector<double> knots, double period, int degree = 3,
                              int penalty_order = 2);

    [[nodiscard]] std::size_t size() const noexcept { return n_basis_; }
    [[nodiscard]] int degree() const noexcept { return degree_; }
    [[nodiscard]] int penalty_order() const noexcept { return penalty_order_; }
    [[nodiscard]] bool is_cyclic() const noexcept { return cyclic_; }
    [[nodiscard]] double period() const noexcept { return period_; }
    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }
    [[nodiscard]] double domain_lo() const noexcept;
    [[nodiscard]] double domain_hi() const noexcept;

    /// Basis values (deriv = 0) or first derivatives (deriv = 1) at x.
    [[nodiscard]] Eigen::RowVectorXd row(double x, int deriv = 0) const;

    /// n x size() design matrix.
    [[nodiscard]] Eigen::MatrixXd design(std::span<const double> x) const;

    /// D'D for the difference operator of order penalty_order().
    [[nodiscard]] Eigen::MatrixXd penalty() const;

    [[nodiscard]] std::string describe() const;

private:
    SplineBasis() = default;
    void accumulate(double x, int deriv, double* out) const;

    std::vector<double> knots_;
    std::vector<double> ext_;  // evaluation knot vector (cyclic: periodically extended)
    int degree_ = 3;
    int penalty_order_ = 2;
    bool cyclic_ = false;
    double period_ = 0.0;
    std::size_t n_basis_ = 0;
};

}  // namespace hetvol
