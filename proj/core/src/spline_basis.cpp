#include "hetvol/spline_basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hetvol {

namespace {

// Index i with ext[i] <= x < ext[i+1], restricted to [lo_span, hi_span];
// the right domain end falls into the last non-empty span.
std::size_t find_span(const std::vector<double>& ext, std::size_t lo_span, std::size_t hi_span,
                      double x) {
    if (x >= ext[hi_span + 1]) {
        std::size_t i = hi_span;
        while (i > lo_span && ext[i] >= ext[i + 1]) --i;
        return i;
    }
    auto it = std::upper_bound(ext.begin() + static_cast<std::ptrdiff_t>(lo_span),
                               ext.begin() + static_cast<std::ptrdiff_t>(hi_span + 1), x);
    return static_cast<std::size_t>(it - ext.begin()) - 1;
}

// Non-zero B-splines N_{span-p..span, p}(x) written to out[0..p].
void basis_funs(const std::vector<double>& t, std::size_t span, int p, double x, double* out) {
    double left[16];
    double right[16];
    out[0] = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = x - t[span + 1 - j];
        right[j] = t[span + j] - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double denom = right[r + 1] + left[j - r];
            const double temp = denom != 0.0 ? out[r] / denom : 0.0;
            out[r] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        out[j] = saved;
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

SplineBasis SplineBasis::open(std::vector<double> knots, int degree, int penalty_order) {
    if (degree < 1) throw std::invalid_argument("spline degree must be at least 1");
    if (penalty_order < 0) throw std::invalid_argument("penalty order must be non-negative");
    if (knots.size() < static_cast<std::size_t>(degree) + 2) {
        throw std::invalid_argument("open spline basis needs at least degree + 2 knots");
    }
    if (!std::is_sorted(knots.begin(), knots.end())) {
        throw std::invalid_argument("spline knots must be non-decreasing");
    }
    SplineBasis b;
    b.degree_ = degree;
    b.penalty_order_ = penalty_order;
    b.knots_ = knots;
    b.ext_ = std::move(knots);
    b.n_basis_ = b.ext_.size() - static_cast<std::size_t>(degree) - 1;
    if (!(b.domain_hi() > b.domain_lo())) {
        throw std::invalid_argument("open spline basis has an empty domain");
    }
    return b;
}

SplineBasis SplineBasis::uniform(double lo, double hi, int n_interior, int degree,
                                 int penalty_order) {
    if (!(hi > lo)) throw std::invalid_argument("uniform spline basis needs hi > lo");
    if (n_interior < 0) throw std::invalid_argument("negative interior knot count");
    const int segments = n_interior + 1;
    const double h = (hi - lo) / segments;
    std::vector<double> knots;
    for (int j = -degree; j <= segments + degree; ++j) {
        knots.push_back(j == segments ? hi : lo + j * h);
    }
    return open(std::move(knots), degree, penalty_order);
}

SplineBasis SplineBasis::uniform_for(std::span<const double> x, int n_interior, int degree,
                                     int penalty_order) {
    if (x.empty()) throw std::invalid_argument("uniform_for: empty covariate");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return uniform(*lo, *hi, n_interior, degree, penalty_order);
}

SplineBasis SplineBasis::cyclic(double start, double period, int n_knots, int degree,
                                int penalty_order) {
    if (n_knots < 1) throw std::invalid_argument("cyclic basis needs knots");
    std::vector<double> knots;
    for (int j = 0; j < n_knots; ++j) knots.push_back(start + period * j / n_knots);
    return cyclic(std::move(knots), period, degree, penalty_order);
}

SplineBasis SplineBasis::cyclic(std::vector<double> knots, double period, int degree,
                                int penalty_order) {
    if (degree < 1) throw std::invalid_argument("spline degree must be at least 1");
    if (knots.size() < static_cast<std::size_t>(degree) + 2) {
        throw std::invalid_argument("cyclic spline basis needs at least degree + 2 knots");
    }
    if (!(period > 0.0)) throw std::invalid_argument("cyclic period must be positive");
    for (std::size_t j = 1; j < knots.size(); ++j) {
        if (!(knots[j] > knots[j - 1])) {
            throw std::invalid_argument("cyclic knots must be strictly increasing");
        }
    }
    if (!(knots.back() < knots.front() + period)) {
        throw std::invalid_argument("cyclic knots must lie within one period");
    }
    SplineBasis b;
    b.degree_ = degree;
    b.penalty_order_ = penalty_order;
    b.cyclic_ = true;
    b.period_ = period;
    b.knots_ = knots;
    const long k = static_cast<long>(knots.size());
    for (long j = -degree; j <= k + degree; ++j) {
        const long q = j >= 0 ? j / k : -((-j + k - 1) / k);
        const long r = j - q * k;
        b.ext_.push_back(knots[static_cast<std::size_t>(r)] + static_cast<double>(q) * period);
    }
    b.n_basis_ = knots.size();
    return b;
}

double SplineBasis::domain_lo() const noexcept {
    return cyclic_ ? knots_.front() : ext_[static_cast<std::size_t>(degree_)];
}

double SplineBasis::domain_hi() const noexcept {
    return cyclic_ ? knots_.front() + period_ : ext_[ext_.size() - static_cast<std::size_t>(degree_) - 1];
}

void SplineBasis::accumulate(double x, int deriv, double* out) const {
    const auto p = static_cast<std::size_t>(degree_);
    const double lo = domain_lo();
    const double hi = domain_hi();
    if (cyclic_) {
        if (x < lo || x > hi) {
            x = lo + std::fmod(std::fmod(x - lo, period_) + period_, period_);
        }
    } else {
        const double slack = 1e-9 * (hi - lo);
        if (x < lo - slack || x > hi + slack || std::isnan(x)) {
            std::ostringstream os;
            os << "x = " << x << " outside spline domain [" << lo << ", " << hi << "]";
            throw std::domain_error(os.str());
        }
        x = std::clamp(x, lo, hi);
    }
    const std::size_t n_open = ext_.size() - p - 1;
    const std::size_t span = find_span(ext_, p, n_open - 1, x);

    double vals[16] = {};
    if (p + 1 > 16) throw std::invalid_argument("spline degree too large");
    if (deriv == 0) {
        basis_funs(ext_, span, degree_, x, vals);
    } else if (deriv == 1) {
        double lower[16] = {};
        basis_funs(ext_, span, degree_ - 1, x, lower);
        for (std::size_t r = 0; r <= p; ++r) {
            const std::size_t k = span - p + r;
            double v = 0.0;
            if (r >= 1) {
                const double d = ext_[k + p] - ext_[k];
                if (d > 0.0) v += lower[r - 1] / d;
            }
            if (r + 1 <= p) {
                const double d = ext_[k + p + 1] - ext_[k + 1];
                if (d > 0.0) v -= lower[r] / d;
            }
            vals[r] = static_cast<double>(degree_) * v;
        }
    } else {
        throw std::invalid_argument("only first derivatives are supported");
    }
    for (std::size_t r = 0; r <= p; ++r) {
        const std::size_t open_index = span - p + r;
        const std::size_t index =
            cyclic_ ? (open_index + n_basis_ * (p + 1) - p) % n_basis_ : open_index;
        out[index] += vals[r];
    }
}

Eigen::RowVectorXd SplineBasis::row(double x, int deriv) const {
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(n_basis_));
    accumulate(x, deriv, r.data());
    return r;
}

Eigen::MatrixXd SplineBasis::design(std::span<const double> x) const {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> b =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()), static_cast<Eigen::Index>(n_basis_));
    for (std::size_t i = 0; i < x.size(); ++i) {
        accumulate(x[i], 0, b.row(static_cast<Eigen::Index>(i)).data());
    }
    return b;
}

Eigen::MatrixXd SplineBasis::penalty() const {
    const auto k = static_cast<Eigen::Index>(n_basis_);
    const int d = penalty_order_;
    if (cyclic_) {
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k, k);
        for (Eigen::Index m = 0; m < k; ++m) {
            for (int j = 0; j <= d; ++j) {
                const double coef = ((d - j) % 2 == 0 ? 1.0 : -1.0) * binomial(d, j);
                D(m, (m + j) % k) += coef;
            }
        }
        return D.transpose() * D;
    }
    if (d >= k) return Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(k - d, k);
    for (Eigen::Index m = 0; m < k - d; ++m) {
        for (int j = 0; j <= d; ++j) {
            D(m, m + j) = ((d - j) % 2 == 0 ? 1.0 : -1.0) * binomial(d, j);
        }
    }
    return D.transpose() * D;
}

std::string SplineBasis::describe() const {
    std::ostringstream os;
    os << (cyclic_ ? "cyclic" : "open") << " degree-" << degree_ << " B-spline basis, "
       << n_basis_ << " functions on [" << domain_lo() << ", " << domain_hi() << "]";
    return os.str();
}

}  // namespace hetvol
