#include "tfpp/caputo.hpp"
#include "tfpp/time_mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace tfpp;

TEST(TimeMesh, GradedNodes) {
    const TimeMesh m(5.0, 100, 2.0);
    EXPECT_DOUBLE_EQ(m.t(1), 5e-4);
    EXPECT_EQ(m.t(0), 0.0);
    EXPECT_DOUBLE_EQ(m.t(100), 5.0);
    for (std::size_t k = 1; k <= m.M(); ++k) {
        EXPECT_GT(m.tau(k), 0.0);
        EXPECT_NEAR(m.t(k), 5.0 * std::pow(k / 100.0, 2.0), 1e-15 * 5.0);
    }
}

TEST(TimeMesh, HigherGradingClustersNearZero) {
    double prev = 1.0;
    for (double r : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        const double t1 = TimeMesh(1.0, 20, r).t(1);
        EXPECT_LT(t1, prev);
        prev = t1;
    }
}

TEST(TimeMesh, RejectsBadInput) {
    EXPECT_THROW(TimeMesh(0.0, 10), ParameterError);
    EXPECT_THROW(TimeMesh(1.0, 0), ParameterError);
    EXPECT_THROW(TimeMesh(1.0, 10, 0.5), ParameterError);
    EXPECT_THROW(TimeMesh::from_nodes({0.0, 0.5, 0.5}), ParameterError);
    EXPECT_EQ(default_grading(0.5), 3.0);
    EXPECT_DOUBLE_EQ(default_grading(0.9), 1.1 / 0.9);
    EXPECT_EQ(default_grading(1.0), 1.0);
}

TEST(L1Weights, HandComputed) {
    const TimeMesh m(1.0, 2, 1.0);
    const auto d = l1_weights(m, 0.5, 2);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[0], (1.0 - std::sqrt(0.5)) / 0.5, 1e-15);
    EXPECT_NEAR(d[0], 0.585786, 1e-6);
    EXPECT_NEAR(d[1], std::pow(0.5, -0.5), 1e-14);
}

TEST(L1Weights, PositiveAndDecreasingOnUniformMesh) {
    const TimeMesh m(2.0, 40, 1.0);
    const double tau = 0.05;
    for (std::size_t k = 1; k <= 40; ++k) {
        const auto d = l1_weights(m, 0.3, k);
        EXPECT_NEAR(d[k - 1], std::pow(tau, -0.3), 1e-12);
        for (std::size_t j = 0; j < k; ++j) {
            EXPECT_GT(d[j], 0.0);
            if (j > 0) {
                EXPECT_LT(d[j - 1], d[j]); // larger k - j means a smaller weight
            }
        }
    }
    EXPECT_THROW(l1_weights(m, 0.3, 0), IndexError);
    EXPECT_THROW(l1_weights(m, 0.3, 41), IndexError);
}

TEST(CaputoL1, ConstantGivesZero) {
    const TimeMesh m(3.0, 30, 2.0);
    const std::vector<double> u(31, 4.2);
    for (double v : caputo_l1(u, m, 0.4)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(CaputoL1, SingleStep) {
    const double tau = 0.37;
    const TimeMesh m(tau, 1);
    const std::vector<double> u{0.0, tau};
    const auto d = caputo_l1(u, m, 0.5);
    EXPECT_NEAR(d[0], std::pow(tau, 0.5) / std::tgamma(1.5), 1e-15);
}

TEST(CaputoL1, ExactOnAffineFunctions) {
    for (double r : {1.0, 2.0, 3.0}) {
        const TimeMesh m(2.0, 50, r);
        std::vector<double> u(51);
        for (std::size_t k = 0; k <= 50; ++k) {
            u[k] = 1.5 - 0.7 * m.t(k);
        }
        const auto d = caputo_l1(u, m, 0.6);
        for (std::size_t k = 1; k <= 50; ++k) {
            EXPECT_NEAR(d[k - 1], -0.7 * std::pow(m.t(k), 0.4) / std::tgamma(1.4), 1e-13);
        }
    }
}

TEST(CaputoL1, QuadraticConvergesToAnalyticValue) {
    const double exact = 2.0 / std::tgamma(2.5);
    EXPECT_NEAR(exact, 1.504506, 1e-6);
    double prev = 1.0;
    for (std::size_t M : {20, 40, 80, 160, 320}) {
        const TimeMesh m(1.0, M);
        std::vector<double> u(M + 1);
        for (std::size_t k = 0; k <= M; ++k) {
            u[k] = m.t(k) * m.t(k);
        }
        const double err = std::abs(caputo_l1(u, m, 0.5).back() - exact);
        EXPECT_LT(err, prev);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(CaputoL1, ShapeMismatch) {
    const TimeMesh m(1.0, 4);
    const std::vector<double> u(4, 0.0);
    EXPECT_THROW(caputo_l1(u, m, 0.5), ShapeError);
    const std::vector<double> v(5, 0.0);
    EXPECT_THROW(caputo_l1(v, m, 1.0), ParameterError);
}
