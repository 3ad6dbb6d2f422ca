#pragma once

#include <Eigen/Core>

#include <dwl/rng.hpp>

namespace testsupport {

// Integer-lattice 2D sample with injected duplicate and collinear rows.
// Integer coordinates keep every sign evaluation inside the depth code
// exact, so exact-rational comparisons between implementations are valid.
inline Eigen::MatrixXd lattice_sample(dwl::Rng& rng, int n, int span) {
    Eigen::MatrixXd m(n, 2);
    for (int i = 0; i < n; ++i) {
        if (i >= 2) {
            const double roll = rng.uniform();
            if (roll < 0.15) { // duplicate an earlier row
                m.row(i) = m.row(static_cast<Eigen::Index>(rng.below(i)));
                continue;
            }
            if (roll < 0.3) { // collinear with two earlier rows
                const auto a = static_cast<Eigen::Index>(rng.below(i));
                const auto b = static_cast<Eigen::Index>(rng.below(i));
                m.row(i) = m.row(a) + 2.0 * (m.row(b) - m.row(a));
                continue;
            }
        }
        m(i, 0) = static_cast<double>(rng.below(span));
        m(i, 1) = static_cast<double>(rng.below(span));
    }
    return m;
}

inline Eigen::MatrixXd gaussian_sample(dwl::Rng& rng, int n, int p) {
    Eigen::MatrixXd m(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = rng.normal();
    return m;
}

// Random integer matrix with |det| >= 1 and a shift, for exact affine maps.
inline void integer_affine_2d(dwl::Rng& rng, Eigen::Matrix2d& a, Eigen::Vector2d& b) {
    do {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                a(i, j) = static_cast<double>(rng.below(7)) - 3.0;
    } while (std::abs(a.determinant()) < 0.5);
    b[0] = static_cast<double>(rng.below(11)) - 5.0;
    b[1] = static_cast<double>(rng.below(11)) - 5.0;
}

} // namespace testsupport
