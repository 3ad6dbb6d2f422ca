#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <dwl/depth.hpp>
#include <dwl/rng.hpp>

#include "support.hpp"

using Catch::Approx;

namespace {

Eigen::MatrixXd unit_square() {
    Eigen::MatrixXd m(4, 2);
    m << 0, 0, 1, 0, 0, 1, 1, 1;
    return m;
}

} // namespace

TEST_CASE("depth_exact_1d counts both closed halves") {
    const std::vector<double> s{1, 2, 3, 4, 5};
    REQUIRE(dwl::depth_exact_1d(3, s).value == Approx(3.0 / 5));
    REQUIRE(dwl::depth_exact_1d(3, s).count == 3);
    REQUIRE(dwl::depth_exact_1d(0, s).value == 0.0);
    REQUIRE(dwl::depth_exact_1d(1, s).value == Approx(1.0 / 5));
    REQUIRE(dwl::depth_exact_1d(5, s).value == Approx(1.0 / 5));
    REQUIRE(dwl::depth_exact_1d(2.5, s).value == Approx(2.0 / 5));

    const std::vector<double> dup{1, 1, 2};
    REQUIRE(dwl::depth_exact_1d(1, dup).count == 2);

    REQUIRE_THROWS_AS(dwl::depth_exact_1d(0, {}), std::domain_error);
}

TEST_CASE("depth_exact_2d on the unit square") {
    const Eigen::MatrixXd sq = unit_square();
    REQUIRE(dwl::depth_exact_2d({0.5, 0.5}, sq).count == 2);
    REQUIRE(dwl::depth_exact_2d({0.0, 0.0}, sq).count == 1);
    REQUIRE(dwl::depth_exact_2d({2.0, 2.0}, sq).count == 0);
    REQUIRE(dwl::depth_exact_2d({0.5, 0.0}, sq).count == 1); // edge midpoint
    REQUIRE(dwl::depth_exact_2d({0.5, 0.5}, sq).n == 4);
    REQUIRE(dwl::depth_exact_2d({0.5, 0.5}, sq).kind == dwl::DepthKind::exact);
}

TEST_CASE("depth_exact_2d degenerate configurations") {
    SECTION("collinear sample") {
        Eigen::MatrixXd line(5, 2);
        line << 0, 0, 1, 1, 2, 2, 3, 3, 4, 4;
        REQUIRE(dwl::depth_exact_2d({2, 2}, line).count == 3);
        REQUIRE(dwl::depth_exact_2d({1.5, 1.5}, line).count == 2);
        REQUIRE(dwl::depth_exact_2d({5, 5}, line).count == 0);
        REQUIRE(dwl::depth_exact_2d({1, 0}, line).count == 0); // off the line
    }
    SECTION("duplicated points") {
        Eigen::MatrixXd m(4, 2);
        m << 0, 0, 0, 0, 1, 0, 0, 1;
        REQUIRE(dwl::depth_exact_2d({0, 0}, m).count == 2);
    }
    SECTION("all points coincident with the query") {
        Eigen::MatrixXd m(3, 2);
        m << 1, 1, 1, 1, 1, 1;
        REQUIRE(dwl::depth_exact_2d({1, 1}, m).value == 1.0);
    }
    SECTION("singleton") {
        Eigen::MatrixXd m(1, 2);
        m << 1, 1;
        REQUIRE(dwl::depth_exact_2d({1, 1}, m).value == 1.0);
        REQUIRE(dwl::depth_exact_2d({0, 0}, m).value == 0.0);
    }
    SECTION("horizontal line, query between") {
        Eigen::MatrixXd m(5, 2);
        m << -2, 0, -1, 0, 1, 0, 2, 0, 3, 0;
        REQUIRE(dwl::depth_exact_2d({0, 0}, m).count == 2);
    }
}

TEST_CASE("depth_oracle agrees with depth_exact_2d") {
    const Eigen::MatrixXd sq = unit_square();
    REQUIRE(dwl::depth_oracle(Eigen::Vector2d(0.5, 0.5), sq).count == 2);
    REQUIRE(dwl::depth_oracle(Eigen::Vector2d(0, 0), sq).count == 1);
    REQUIRE(dwl::depth_oracle(Eigen::Vector2d(2, 2), sq).count == 0);

    Eigen::MatrixXd single(1, 2);
    single << 3, 4;
    REQUIRE(dwl::depth_oracle(Eigen::Vector2d(3, 4), single).value == 1.0);

    dwl::Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(38));
        const Eigen::MatrixXd data = testsupport::lattice_sample(rng, n, 7);
        for (int q = 0; q < 5; ++q) {
            Eigen::Vector2d x;
            switch (q) {
                case 0: x = data.row(static_cast<Eigen::Index>(rng.below(n))).transpose(); break;
                case 1:
                    x << static_cast<double>(rng.below(7)), static_cast<double>(rng.below(7));
                    break;
                case 2:
                    x << std::round(data.col(0).mean()), std::round(data.col(1).mean());
                    break;
                case 3: x << 40, 41; break;
                default:
                    x << static_cast<double>(rng.below(29)) - 14.0,
                         static_cast<double>(rng.below(29)) - 14.0;
            }
            const auto sweep = dwl::depth_exact_2d(x, data);
            const auto oracle = dwl::depth_oracle(x, data);
            INFO("n=" << n << " query=(" << x[0] << "," << x[1] << ")");
            REQUIRE(sweep.count == oracle.count);
            REQUIRE(sweep.n == oracle.n);
        }
    }

    // continuous data: ties are absent, both must still agree
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(30));
        const Eigen::MatrixXd data = testsupport::gaussian_sample(rng, n, 2);
        const Eigen::Vector2d x(rng.normal(), rng.normal());
        REQUIRE(dwl::depth_exact_2d(x, data).count == dwl::depth_oracle(x, data).count);
    }

    Eigen::MatrixXd big(101, 2);
    big.setZero();
    REQUIRE_THROWS_AS(dwl::depth_oracle(Eigen::Vector2d(0, 0), big), std::domain_error);
    Eigen::MatrixXd wide(4, 3);
    wide.setZero();
    REQUIRE_THROWS_AS(dwl::depth_oracle(Eigen::Vector3d(0, 0, 0), wide),
                      dwl::UnsupportedDimensionError);
}

TEST_CASE("finite-sample depth is affine invariant") {
    dwl::Rng rng(77);
    SECTION("2d, exact rational equality under integer affine maps") {
        for (int trial = 0; trial < 40; ++trial) {
            const int n = 4 + static_cast<int>(rng.below(30));
            const Eigen::MatrixXd data = testsupport::lattice_sample(rng, n, 7);
            Eigen::Vector2d x;
            x << static_cast<double>(rng.below(9)) - 1.0,
                 static_cast<double>(rng.below(9)) - 1.0;

            Eigen::Matrix2d a;
            Eigen::Vector2d b;
            testsupport::integer_affine_2d(rng, a, b);

            const Eigen::MatrixXd mapped =
                (data * a.transpose()).rowwise() + b.transpose();
            const Eigen::Vector2d xm = a * x + b;
            REQUIRE(dwl::depth_exact_2d(xm, mapped).count ==
                    dwl::depth_exact_2d(x, data).count);
        }
    }
    SECTION("1d under scale and flip") {
        const std::vector<double> s{0, 1, 1, 2, 5, 7};
        for (const double q : {0.0, 1.0, 3.0, 7.0, 9.0}) {
            const auto base = dwl::depth_exact_1d(q, s);
            for (const double scale : {2.5, -1.5})
                for (const double shift : {0.0, 3.0}) {
                    std::vector<double> mapped;
                    for (double v : s) mapped.push_back(scale * v + shift);
                    REQUIRE(dwl::depth_exact_1d(scale * q + shift, mapped).count == base.count);
                }
        }
    }
}

TEST_CASE("model_depth_normal closed forms") {
    dwl::ModelParams theta1;
    theta1.mu = Eigen::VectorXd::Constant(1, 0.0);
    theta1.sigma = Eigen::MatrixXd::Identity(1, 1);
    REQUIRE(dwl::model_depth_normal(theta1.mu, theta1).value == 0.5);
    // p=1, x=1: (1 - erf(1/sqrt 2)) / 2 = 1 - Phi(1)
    REQUIRE(dwl::model_depth_normal(Eigen::VectorXd::Constant(1, 1.0), theta1).value ==
            Approx(0.15865525393145705).margin(1e-10));

    dwl::ModelParams theta2;
    theta2.mu = Eigen::Vector2d(0, 0);
    theta2.sigma = Eigen::Matrix2d::Identity();
    // 1 - Phi(r) at the 95% chi-square_2 radius r = sqrt(5.991464547107982)
    const double r = std::sqrt(5.991464547107982);
    REQUIRE(dwl::model_depth_normal(Eigen::Vector2d(r, 0), theta2).value ==
            Approx(0.007187631212321853).margin(1e-12));
    // 1 - Phi(1) again: the depth depends on the Mahalanobis distance only,
    // not on the dimension
    REQUIRE(dwl::model_depth_normal(Eigen::Vector2d(1, 0), theta2).value ==
            Approx(0.15865525393145705).margin(1e-12));
    REQUIRE(dwl::model_depth_normal(Eigen::Vector2d(1, 1), theta2).value ==
            Approx(0.07864960352514257).margin(1e-12));
    REQUIRE(dwl::model_depth_normal(theta2.mu, theta2).kind == dwl::DepthKind::model);
}

TEST_CASE("model_depth_normal: maximum at mu, decay along rays, vanishing") {
    dwl::Rng rng(555);
    for (const int p : {1, 2, 3}) {
        dwl::ModelParams theta;
        theta.mu = rng.normal_vector(p);
        Eigen::MatrixXd b(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) b(i, j) = rng.normal();
        theta.sigma = b * b.transpose() + 0.5 * Eigen::MatrixXd::Identity(p, p);

        REQUIRE(dwl::model_depth_normal(theta.mu, theta).value == 0.5);

        const Eigen::VectorXd u = rng.unit_vector(p);
        double prev = 0.5;
        for (int k = 1; k <= 12; ++k) {
            const double t = 0.4 * k;
            const double v = dwl::model_depth_normal(theta.mu + t * u, theta).value;
            REQUIRE(v <= prev);
            if (k <= 4) REQUIRE(v < prev); // strict decay at moderate distance
            REQUIRE(v > 0.0);
            REQUIRE(v <= 0.5);
            prev = v;
        }

        // vanishing at infinity: squared Mahalanobis 60
        const Eigen::VectorXd far =
            theta.mu + std::sqrt(60.0 / dwl::mahalanobis_sq(theta.mu + u, theta)) * u;
        REQUIRE(dwl::model_depth_normal(far, theta).value < 1e-6);
    }
}

TEST_CASE("depth_approx bounds, nesting, determinism") {
    dwl::Rng rng(31337);
    const Eigen::MatrixXd data = testsupport::gaussian_sample(rng, 60, 2);

    SECTION("upper-bounds the exact depth") {
        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::Vector2d x(rng.normal(), rng.normal());
            const auto approx = dwl::depth_approx(x, data, 40, 7);
            const auto exact = dwl::depth_exact_2d(x, data);
            REQUIRE(approx.count >= exact.count);
            REQUIRE(approx.kind == dwl::DepthKind::approximate);
        }
    }
    SECTION("zero outside the convex hull via data directions") {
        const Eigen::Vector2d far(data.col(0).maxCoeff() + 5.0, data.col(1).maxCoeff() + 5.0);
        REQUIRE(dwl::depth_approx(far, data, 1, 99).value == 0.0);
    }
    SECTION("nested direction sets: more directions never increase the value") {
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::Vector2d x(rng.normal(), rng.normal());
            const auto d10 = dwl::depth_approx(x, data, 10, 4242);
            const auto d200 = dwl::depth_approx(x, data, 200, 4242);
            REQUIRE(d200.count <= d10.count);
        }
    }
    SECTION("deterministic given the seed") {
        const Eigen::Vector2d x(0.3, -0.2);
        REQUIRE(dwl::depth_approx(x, data, 64, 5).count ==
                dwl::depth_approx(x, data, 64, 5).count);
    }
    SECTION("single forced direction equals 1d depth of the projections") {
        std::vector<Eigen::VectorXd> dirs{Eigen::Vector2d(1.0, 0.0)};
        const Eigen::Vector2d x(0.1, 99.0); // second coordinate is invisible
        std::vector<double> first(data.col(0).data(), data.col(0).data() + data.rows());
        REQUIRE(dwl::depth_from_directions(x, data, dirs).count ==
                dwl::depth_exact_1d(0.1, first).count);
    }
}

TEST_CASE("sample_depths matches pointwise depth and stays in range") {
    dwl::Rng rng(864);
    SECTION("2d exact") {
        const Eigen::MatrixXd data = testsupport::lattice_sample(rng, 25, 6);
        const Eigen::VectorXd depths = dwl::sample_depths(data);
        for (Eigen::Index i = 0; i < data.rows(); ++i)
            REQUIRE(depths[i] == dwl::depth_exact_2d(data.row(i).transpose(), data).value);
    }
    SECTION("1d exact") {
        Eigen::MatrixXd data(5, 1);
        data << 1, 2, 3, 4, 5;
        const Eigen::VectorXd depths = dwl::sample_depths(data);
        REQUIRE(depths[2] == Approx(3.0 / 5));
        REQUIRE(depths[0] == Approx(1.0 / 5));
    }
    SECTION("3d approximate: bounds and determinism") {
        const Eigen::MatrixXd data = testsupport::gaussian_sample(rng, 40, 3);
        const Eigen::VectorXd a = dwl::sample_depths(data, 200, 11);
        const Eigen::VectorXd b = dwl::sample_depths(data, 200, 11);
        REQUIRE((a - b).norm() == 0.0);
        for (Eigen::Index i = 0; i < data.rows(); ++i) {
            REQUIRE(a[i] >= 1.0 / data.rows()); // every point supports itself
            REQUIRE(a[i] <= 1.0);
        }
    }
}

TEST_CASE("finite-sample depth approaches the model depth on large samples") {
    dwl::Rng rng(181818);
    const int n = 20000;
    Eigen::MatrixXd data(n, 2);
    for (int i = 0; i < n; ++i) {
        data(i, 0) = rng.normal();
        data(i, 1) = rng.normal();
    }
    dwl::ModelParams theta;
    theta.mu = Eigen::Vector2d(0, 0);
    theta.sigma = Eigen::Matrix2d::Identity();
    for (const auto& q : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 1)}) {
        const double dn = dwl::depth_exact_2d(q, data).value;
        const double dm = dwl::model_depth_normal(q, theta).value;
        REQUIRE(std::abs(dn - dm) < 0.02);
    }
}
