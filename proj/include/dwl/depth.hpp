#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dwl/errors.hpp"
#include "dwl/numerics.hpp"
#include "dwl/rng.hpp"

namespace dwl {

enum class DepthKind { exact, approximate, model };

/// A halfspace depth value. Finite-sample depths carry the halfspace count
/// and sample size so k/n can be compared as an exact rational.
struct DepthValue {
    double value = 0.0;
    DepthKind kind = DepthKind::exact;
    std::int64_t count = -1;   // finite-sample kinds only
    std::int64_t n = 0;        // finite-sample kinds only
};

/// Exact univariate halfspace depth: min(#{x_i <= x}, #{x_i >= x}) / n.
inline DepthValue depth_exact_1d(double x, const std::vector<double>& sample) {
    if (sample.empty()) throw std::domain_error("depth_exact_1d: empty sample");
    std::int64_t below = 0, above = 0;
    for (double v : sample) {
        if (v <= x) ++below;
        if (v >= x) ++above;
    }
    const std::int64_t count = std::min(below, above);
    const auto n = static_cast<std::int64_t>(sample.size());
    return {static_cast<double>(count) / static_cast<double>(n), DepthKind::exact, count, n};
}

namespace detail {

struct Vec2 {
    double x, y;
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// 0 for the open upper halfplane plus the positive x-axis, 1 otherwise.
// Splitting first by half makes the cross-product comparator a total
// circular order with exact tie detection for equal directions.
inline int angular_half(const Vec2& v) {
    return (v.y > 0.0 || (v.y == 0.0 && v.x > 0.0)) ? 0 : 1;
}

inline bool angular_less(const Vec2& a, const Vec2& b) {
    const int ha = angular_half(a), hb = angular_half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0.0;
}

} // namespace detail

/// Exact bivariate halfspace depth by the angular sweep. Points are
/// translated so the query sits at the origin; coincident points lie in
/// every closed halfplane. The closed-halfplane minimum equals n minus the
/// largest number of points inside an open halfplane, found as the best
/// half-open angular window [theta_i, theta_i + pi) over the sorted
/// direction groups.
inline DepthValue depth_exact_2d(const Eigen::Vector2d& x, const Eigen::MatrixXd& sample) {
    if (sample.rows() < 1) throw std::domain_error("depth_exact_2d: empty sample");
    if (sample.cols() != 2) throw std::invalid_argument("depth_exact_2d: sample must have 2 columns");

    const auto n = static_cast<std::int64_t>(sample.rows());
    std::vector<detail::Vec2> pts;
    pts.reserve(sample.rows());
    std::int64_t coincident = 0;
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        const detail::Vec2 v{sample(i, 0) - x[0], sample(i, 1) - x[1]};
        if (v.x == 0.0 && v.y == 0.0) ++coincident; else pts.push_back(v);
    }
    const auto m = static_cast<std::int64_t>(pts.size());
    if (m == 0) return {1.0, DepthKind::exact, n, n};

    std::sort(pts.begin(), pts.end(), detail::angular_less);

    // group equal directions (same half, zero cross product)
    std::vector<detail::Vec2> dir;
    std::vector<std::int64_t> cnt;
    for (const auto& v : pts) {
        if (!dir.empty() && detail::angular_half(dir.back()) == detail::angular_half(v) &&
            detail::cross(dir.back(), v) == 0.0) {
            ++cnt.back();
        } else {
            dir.push_back(v);
            cnt.push_back(1);
        }
    }
    const std::size_t k = dir.size();

    std::int64_t max_open = 0;
    std::size_t j = 0;      // absolute two-pointer index, window is groups [i, j)
    std::int64_t in_window = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (j <= i) {
            j = i + 1;
            in_window = cnt[i];
        }
        while (j < i + k) {
            const auto& g = dir[j % k];
            if (detail::cross(dir[i], g) > 0.0) {
                in_window += cnt[j % k];
                ++j;
            } else {
                break;
            }
        }
        max_open = std::max(max_open, in_window);
        in_window -= cnt[i];
    }

    const std::int64_t count = coincident + m - max_open;
    return {static_cast<double>(count) / static_cast<double>(n), DepthKind::exact, count, n};
}

/// Halfspace depth upper bound from an explicit direction set: the minimum
/// univariate depth of the projections. Each direction covers both of its
/// signs through the two-sided 1D count.
inline DepthValue depth_from_directions(const Eigen::VectorXd& x, const Eigen::MatrixXd& sample,
                                        const std::vector<Eigen::VectorXd>& directions) {
    if (sample.rows() < 1) throw std::domain_error("depth_from_directions: empty sample");
    if (sample.cols() != x.size())
        throw std::invalid_argument("depth_from_directions: dimension mismatch");
    if (directions.empty())
        throw std::domain_error("depth_from_directions: empty direction set");

    const auto n = static_cast<std::int64_t>(sample.rows());
    std::int64_t best = n;
    for (const auto& u : directions) {
        const double at = u.dot(x);
        std::int64_t below = 0, above = 0;
        for (Eigen::Index i = 0; i < sample.rows(); ++i) {
            const double t = u.dot(sample.row(i));
            if (t <= at) ++below;
            if (t >= at) ++above;
        }
        best = std::min(best, std::min(below, above));
        if (best == 0) break;
    }
    return {static_cast<double>(best) / static_cast<double>(n), DepthKind::approximate, best, n};
}

/// Random-projection halfspace depth for any dimension: an upper bound on
/// the exact depth. The direction pool is the n_dirs seeded uniform unit
/// vectors plus every data-to-query direction, so a query outside the
/// convex hull beyond a data vertex is detected as depth zero. Fixing the
/// seed makes direction sets nested in n_dirs.
inline DepthValue depth_approx(const Eigen::VectorXd& x, const Eigen::MatrixXd& sample,
                               int n_dirs, std::uint64_t seed) {
    if (sample.rows() < 1) throw std::domain_error("depth_approx: empty sample");
    if (sample.cols() != x.size())
        throw std::invalid_argument("depth_approx: dimension mismatch");
    if (n_dirs < 1) throw std::domain_error("depth_approx: n_dirs must be positive");

    const Eigen::Index p = x.size();
    std::vector<Eigen::VectorXd> directions;
    directions.reserve(static_cast<std::size_t>(sample.rows()) + static_cast<std::size_t>(n_dirs));
    for (Eigen::Index i = 0; i < sample.rows(); ++i) {
        Eigen::VectorXd d = sample.row(i).transpose() - x;
        const double norm = d.norm();
        if (norm > 0.0) directions.push_back(d / norm);
    }
    Rng rng(mix_seed(seed, 0x6472756964ULL));
    for (int k = 0; k < n_dirs; ++k) directions.push_back(rng.unit_vector(p));
    return depth_from_directions(x, sample, directions);
}

/// Brute-force bivariate halfspace depth for testing: enumerates the normals
/// of every line through two points of sample + {query}, nudged to both
/// sides, plus all data-to-query directions. The minimizing closed halfplane
/// can be rotated about the query until its boundary meets a data direction,
/// so the enumeration covers every angular interval and attains the exact
/// minimum. Univariate input falls back to the exact count.
inline DepthValue depth_oracle(const Eigen::VectorXd& x, const Eigen::MatrixXd& sample) {
    const Eigen::Index p = sample.cols();
    if (p > 2) throw UnsupportedDimensionError("depth_oracle: only dimensions 1 and 2 are supported");
    if (sample.rows() < 1) throw std::domain_error("depth_oracle: empty sample");
    if (sample.rows() > 100) throw std::domain_error("depth_oracle: sample too large (cost guard)");
    if (x.size() != p) throw std::invalid_argument("depth_oracle: dimension mismatch");

    const auto n = static_cast<std::int64_t>(sample.rows());
    if (p == 1) {
        std::vector<double> flat(sample.data(), sample.data() + sample.rows());
        DepthValue d = depth_exact_1d(x[0], flat);
        return d;
    }

    std::vector<detail::Vec2> rel;
    rel.reserve(sample.rows() + 1);
    for (Eigen::Index i = 0; i < sample.rows(); ++i)
        rel.push_back({sample(i, 0) - x[0], sample(i, 1) - x[1]});
    rel.push_back({0.0, 0.0}); // the query itself, for pair normals through x

    constexpr double eps = 1e-8;
    const double c = std::cos(eps), s = std::sin(eps);
    std::vector<detail::Vec2> candidates;
    auto add_with_nudges = [&](double ux, double uy) {
        const double norm = std::hypot(ux, uy);
        if (norm == 0.0) return;
        ux /= norm;
        uy /= norm;
        for (double sign : {1.0, -1.0}) {
            const double vx = sign * ux, vy = sign * uy;
            candidates.push_back({vx, vy});
            candidates.push_back({c * vx - s * vy, s * vx + c * vy});
            candidates.push_back({c * vx + s * vy, -s * vx + c * vy});
        }
    };
    for (std::size_t i = 0; i < rel.size(); ++i) {
        for (std::size_t j = i + 1; j < rel.size(); ++j) {
            const double ex = rel[j].x - rel[i].x;
            const double ey = rel[j].y - rel[i].y;
            add_with_nudges(-ey, ex);
        }
        add_with_nudges(rel[i].x, rel[i].y); // data-to-query direction
    }

    std::int64_t best = n;
    for (const auto& u : candidates) {
        std::int64_t count = 0;
        for (Eigen::Index i = 0; i < sample.rows(); ++i)
            if (u.x * (sample(i, 0) - x[0]) + u.y * (sample(i, 1) - x[1]) >= 0.0) ++count;
        best = std::min(best, count);
    }
    return {static_cast<double>(best) / static_cast<double>(n), DepthKind::exact, best, n};
}

/// Halfspace depth of the multivariate normal model. The minimizing closed
/// halfspace at x is bounded by the hyperplane through x normal to the
/// standardized direction of x - mu, so only the one-dimensional marginal
/// along that direction matters, in any dimension: with r the Mahalanobis
/// distance, D = 1 - Phi(r) = erfc(r / sqrt(2)) / 2, equivalently
/// (1 - F_chi2_1(r^2)) / 2. Maximal value 0.5 at the mean, strictly
/// decreasing in r (dimension enters only through r itself).
inline DepthValue model_depth_normal(const Eigen::VectorXd& x, const ModelParams& theta) {
    const double d = mahalanobis_sq(x, theta);
    const double value = 0.5 * std::erfc(std::sqrt(0.5 * d));
    return {value, DepthKind::model, -1, 0};
}

/// Finite-sample depth of every data point against its own sample: exact
/// for dimensions 1 and 2, random-projection otherwise. Row i's direction
/// seed is derived from (seed, i), so results do not depend on evaluation
/// order. n_dirs <= 0 selects the default 1000 * dim.
inline Eigen::VectorXd sample_depths(const Eigen::MatrixXd& data, int n_dirs = 0,
                                     std::uint64_t seed = 0) {
    const Eigen::Index n = data.rows();
    const Eigen::Index p = data.cols();
    if (n < 1) throw std::domain_error("sample_depths: empty sample");
    Eigen::VectorXd out(n);
    if (p == 1) {
        std::vector<double> flat(data.data(), data.data() + n);
        for (Eigen::Index i = 0; i < n; ++i) out[i] = depth_exact_1d(data(i, 0), flat).value;
    } else if (p == 2) {
        for (Eigen::Index i = 0; i < n; ++i)
            out[i] = depth_exact_2d(data.row(i).transpose(), data).value;
    } else {
        const int dirs = n_dirs > 0 ? n_dirs : 1000 * static_cast<int>(p);
        for (Eigen::Index i = 0; i < n; ++i)
            out[i] = depth_approx(data.row(i).transpose(), data, dirs,
                                  mix_seed(seed, static_cast<std::uint64_t>(i))).value;
    }
    return out;
}

} // namespace dwl
