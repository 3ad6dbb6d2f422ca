#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dwl/errors.hpp"

namespace dwl {

/// Location/scatter parameters of a multivariate normal.
struct ModelParams {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;

    Eigen::Index dim() const { return mu.size(); }
};

namespace detail {

// Regularized lower incomplete gamma P(a, x) by power series.
inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by modified Lentz continued fraction.
inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int k = 1; k < 10000; ++k) {
        const double an = -k * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace detail

/// Chi-squared CDF with `dof` degrees of freedom, i.e. the regularized lower
/// incomplete gamma P(dof/2, d/2). Series below d = dof + 1, continued
/// fraction above, so both tails keep full accuracy.
inline double chi2_cdf(double d, int dof) {
    if (!(d >= 0.0)) throw std::domain_error("chi2_cdf: d must be nonnegative");
    if (dof < 1) throw std::domain_error("chi2_cdf: dof must be positive");
    if (d == 0.0) return 0.0;
    const double a = 0.5 * dof;
    const double x = 0.5 * d;
    if (d < dof + 1.0) return detail::gamma_p_series(a, x);
    return 1.0 - detail::gamma_q_contfrac(a, x);
}

/// Inverse chi-squared CDF by bisection on chi2_cdf (bracket width 1e-13).
inline double chi2_quantile(double q, int dof) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("chi2_quantile: q must lie in (0,1)");
    if (dof < 1) throw std::domain_error("chi2_quantile: dof must be positive");
    double lo = 0.0;
    double hi = dof + 16.0;
    while (chi2_cdf(hi, dof) < q) {
        hi *= 2.0;
        if (hi > 1e9) break;
    }
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (chi2_cdf(mid, dof) < q) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Lower-triangular Cholesky factor of an SPD matrix. A pivot at or below
/// 1e-12 times the largest diagonal entry counts as not positive definite
/// and raises NotSpdError with the failing pivot index.
class SpdFactor {
public:
    explicit SpdFactor(const Eigen::MatrixXd& sigma) {
        const Eigen::Index p = sigma.rows();
        if (p == 0 || sigma.cols() != p)
            throw std::invalid_argument("SpdFactor: matrix must be square and nonempty");
        const double scale = sigma.cwiseAbs().maxCoeff();
        const double sym_tol = 1e-12 * std::max(scale, 1.0);
        if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > sym_tol)
            throw std::invalid_argument("SpdFactor: matrix is not symmetric");

        const double pivot_tol = 1e-12 * sigma.diagonal().maxCoeff();
        lower_ = Eigen::MatrixXd::Zero(p, p);
        for (Eigen::Index j = 0; j < p; ++j) {
            double diag = sigma(j, j);
            for (Eigen::Index k = 0; k < j; ++k) diag -= lower_(j, k) * lower_(j, k);
            if (!(diag > pivot_tol))
                throw NotSpdError(static_cast<int>(j), diag);
            lower_(j, j) = std::sqrt(diag);
            for (Eigen::Index i = j + 1; i < p; ++i) {
                double s = sigma(i, j);
                for (Eigen::Index k = 0; k < j; ++k) s -= lower_(i, k) * lower_(j, k);
                lower_(i, j) = s / lower_(j, j);
            }
        }
    }

    Eigen::Index dim() const { return lower_.rows(); }
    const Eigen::MatrixXd& lower() const { return lower_; }

    /// Solve L y = v by forward substitution.
    Eigen::VectorXd solve_lower(const Eigen::VectorXd& v) const {
        return lower_.triangularView<Eigen::Lower>().solve(v);
    }

    double log_det() const {
        return 2.0 * lower_.diagonal().array().log().sum();
    }

    /// (x - mu)^T Sigma^{-1} (x - mu) via the factor, no explicit inverse.
    double mahalanobis_sq(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) const {
        return solve_lower(x - mu).squaredNorm();
    }

private:
    Eigen::MatrixXd lower_;
};

/// Squared Mahalanobis distance of x from theta.
inline double mahalanobis_sq(const Eigen::VectorXd& x, const ModelParams& theta) {
    if (x.size() != theta.mu.size())
        throw std::invalid_argument("mahalanobis_sq: dimension mismatch");
    return SpdFactor(theta.sigma).mahalanobis_sq(x, theta.mu);
}

/// Points tracing the chi-squared confidence region boundary at `level`.
/// For dim 3 the points are three orthogonal principal-plane slices,
/// n_points each, in eigenvector-pair order (0,1), (0,2), (1,2).
struct EllipsoidBoundary {
    double level = 0.0;
    std::vector<Eigen::VectorXd> points;
};

inline EllipsoidBoundary ellipsoid_boundary(const ModelParams& theta, double level, int n_points) {
    if (!(level > 0.0 && level < 1.0))
        throw std::domain_error("ellipsoid_boundary: level must lie in (0,1)");
    if (n_points < 1)
        throw std::domain_error("ellipsoid_boundary: n_points must be positive");
    const Eigen::Index p = theta.dim();
    if (p != 2 && p != 3)
        throw UnsupportedDimensionError("ellipsoid_boundary: only dimensions 2 and 3 are supported");

    const double radius = std::sqrt(chi2_quantile(level, static_cast<int>(p)));
    EllipsoidBoundary boundary;
    boundary.level = level;

    if (p == 2) {
        const Eigen::MatrixXd lower = SpdFactor(theta.sigma).lower();
        boundary.points.reserve(n_points);
        for (int k = 0; k < n_points; ++k) {
            const double t = 2.0 * M_PI * k / n_points;
            Eigen::Vector2d circle(std::cos(t), std::sin(t));
            boundary.points.push_back(theta.mu + radius * (lower * circle));
        }
        return boundary;
    }

    SpdFactor check(theta.sigma); // validates SPD before the eigensolver
    (void)check;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(theta.sigma);
    const Eigen::VectorXd scale = eigen.eigenvalues().cwiseSqrt();
    const Eigen::MatrixXd axes = eigen.eigenvectors();
    const std::pair<int, int> planes[] = {{0, 1}, {0, 2}, {1, 2}};
    boundary.points.reserve(3 * n_points);
    for (const auto& [i, j] : planes) {
        for (int k = 0; k < n_points; ++k) {
            const double t = 2.0 * M_PI * k / n_points;
            boundary.points.push_back(theta.mu +
                                      radius * (scale[i] * std::cos(t) * axes.col(i) +
                                                scale[j] * std::sin(t) * axes.col(j)));
        }
    }
    return boundary;
}

} // namespace dwl
