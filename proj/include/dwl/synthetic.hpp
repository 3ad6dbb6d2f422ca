#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dwl/dataset.hpp"
#include "dwl/numerics.hpp"
#include "dwl/rng.hpp"

namespace dwl {

/// n draws from N(mu, sigma), rows are observations.
inline Eigen::MatrixXd sample_gaussian(Rng& rng, int n, const Eigen::VectorXd& mu,
                                       const Eigen::MatrixXd& sigma) {
    const Eigen::Index p = mu.size();
    const Eigen::MatrixXd lower = SpdFactor(sigma).lower();
    Eigen::MatrixXd out(n, p);
    for (int i = 0; i < n; ++i)
        out.row(i) = (mu + lower * rng.normal_vector(p)).transpose();
    return out;
}

/// Two bivariate clusters of 152 points each, N((0,0), 0.5 I) and
/// N((4,4), 0.5 I): the desk-scale stand-in for a two-group sample of 304.
inline Dataset two_cluster(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x74776FULL));
    Dataset d;
    d.columns = {"x1", "x2"};
    d.x.resize(304, 2);
    d.x.topRows(152) = sample_gaussian(rng, 152, Eigen::Vector2d(0.0, 0.0),
                                       0.5 * Eigen::Matrix2d::Identity());
    d.x.bottomRows(152) = sample_gaussian(rng, 152, Eigen::Vector2d(4.0, 4.0),
                                          0.5 * Eigen::Matrix2d::Identity());
    return d;
}

/// Three well-separated trivariate clusters of 100 points each with
/// covariance 0.5 I.
inline Dataset three_cluster(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 0x7468726565ULL));
    Dataset d;
    d.columns = {"x1", "x2", "x3"};
    d.x.resize(300, 3);
    const Eigen::Matrix3d sigma = 0.5 * Eigen::Matrix3d::Identity();
    d.x.topRows(100) = sample_gaussian(rng, 100, Eigen::Vector3d(0.0, 0.0, 0.0), sigma);
    d.x.middleRows(100, 100) = sample_gaussian(rng, 100, Eigen::Vector3d(6.0, 6.0, 6.0), sigma);
    d.x.bottomRows(100) = sample_gaussian(rng, 100, Eigen::Vector3d(6.0, -6.0, 0.0), sigma);
    return d;
}

/// Named generator dispatch used by the command line.
inline Dataset generate_dataset(const std::string& kind, std::uint64_t seed) {
    if (kind == "two-cluster") return two_cluster(seed);
    if (kind == "three-cluster") return three_cluster(seed);
    throw std::invalid_argument("unknown generator '" + kind +
                                "' (expected two-cluster or three-cluster)");
}

} // namespace dwl
