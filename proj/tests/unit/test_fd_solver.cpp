#include "tfpp/caputo.hpp"
#include "tfpp/fd_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tfpp;

namespace {

constexpr double pi = std::numbers::pi;

ProblemSpec worked_example() {
    ProblemSpec p;
    p.rho = 0.5;
    p.mu = 1.0;
    p.T = 5.0;
    p.sigma = [](double t) { return 2.0 + std::sqrt(t); };
    p.phi = [](double x) { return 2.0 * std::sin(pi * x); };
    p.g = [](double x) { return std::numbers::sqrt2 * (1.0 + pi * pi) * std::sin(pi * x); };
    p.source_r = [](double t) {
        return 16.0 / (3.0 * std::sqrt(2.0 * pi)) * std::pow(t, 1.5) +
               std::numbers::sqrt2 * pi * pi / (1.0 + pi * pi) * (2.0 + std::sqrt(t)) * (1.0 + t * t);
    };
    return p;
}

double exact(double x, double t) {
    return 2.0 * (1.0 + t * t) * std::sin(pi * x);
}

StepSystem random_system(std::mt19937_64& gen, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    StepSystem s;
    s.sub.resize(n);
    s.super.resize(n);
    s.diag.resize(n);
    s.rhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.sub[i] = i == 0 ? 0.0 : u(gen);
        s.super[i] = i + 1 == n ? 0.0 : u(gen);
        const double off = std::abs(s.sub[i]) + std::abs(s.super[i]);
        s.diag[i] = (off + 0.05 + std::abs(u(gen))) * (u(gen) < 0 ? -1.0 : 1.0);
        s.rhs[i] = 10.0 * u(gen);
    }
    return s;
}

} // namespace

TEST(Thomas, IdentitySystem) {
    const StepSystem s = StepSystem::constant(5, 0.0, 1.0, {1, -2, 3, -4, 5});
    const auto x = thomas_solve(s);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(x[i], s.rhs[i]);
    }
}

TEST(Thomas, ThreeByThree) {
    // tridiag(-1, 3, -1) x = (1, 1, 1): x_1 = x_3 and 3 x_1 - x_2 = 1, -2 x_1 + 3 x_2 = 1.
    const StepSystem s = StepSystem::constant(3, 1.0, 3.0, {1, 1, 1});
    const auto x = thomas_solve(s);
    EXPECT_NEAR(x[0], 4.0 / 7.0, 1e-15);
    EXPECT_NEAR(x[1], 5.0 / 7.0, 1e-15);
    EXPECT_NEAR(x[2], 4.0 / 7.0, 1e-15);
    const auto y = dense_solve(s);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(x[i], y[i], 1e-15);
    }
}

TEST(Thomas, MatchesDenseOnRandomDominantSystems) {
    std::mt19937_64 gen(424242);
    std::uniform_int_distribution<std::size_t> size(1, 64);
    for (int n = 0; n < 200; ++n) {
        const StepSystem s = random_system(gen, size(gen));
        const auto x = thomas_solve(s);
        const auto y = dense_solve(s);
        double bnorm = 0.0;
        for (double b : s.rhs) {
            bnorm = std::max(bnorm, std::abs(b));
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            ASSERT_NEAR(x[i], y[i], 1e-10) << "system " << n << " row " << i;
        }
        EXPECT_LE(residual_inf(s, x), 1e-10 * bnorm);
    }
}

TEST(Thomas, RejectsNonDominantSystem) {
    const StepSystem s = StepSystem::constant(4, 1.0, 2.0, {1, 1, 1, 1});
    EXPECT_THROW(thomas_solve(s), IllPosedSystemError);
}

TEST(AssembleStep, CoefficientsAndFirstStep) {
    const ProblemSpec p = worked_example();
    const SpaceGrid grid(20);
    const TimeMesh mesh(p.T, 10, 3.0);
    SolutionField field(grid, mesh);
    for (std::size_t i = 1; i < 20; ++i) {
        field.at(i, 0) = p.phi(grid.x(i));
    }
    const StepSystem s = assemble_step(p, field, 1);
    const double h = grid.h();
    const double G = std::tgamma(1.5);
    const double d11 = std::pow(mesh.tau(1), -0.5);
    const double s1 = p.sigma(mesh.t(1));
    EXPECT_NEAR(s.a, p.mu * d11 / (G * h * h) + s1 / (h * h), 1e-9);
    EXPECT_NEAR(s.c, d11 / G + 2.0 * p.mu * d11 / (G * h * h) + 2.0 * s1 / (h * h), 1e-9);
    EXPECT_NEAR(s.c - 2.0 * s.a, d11 / G, 1e-9);
    for (std::size_t i = 1; i < 20; ++i) {
        const double u = field.at(i, 0);
        const double lap = field.at(i + 1, 0) - 2.0 * u + field.at(i - 1, 0);
        const double b = d11 * u / G - p.mu / (G * h * h) * d11 * lap + p.source_r(mesh.t(1)) * p.g(grid.x(i));
        EXPECT_NEAR(s.rhs[i - 1], b, 1e-10 * std::abs(b));
    }
    EXPECT_THROW(assemble_step(p, field, 0), IndexError);
    EXPECT_THROW(assemble_step(p, field, 11), IndexError);
}

TEST(AssembleStep, NearlyFirstOrderWeightApproachesBackwardEuler) {
    const TimeMesh mesh(1.0, 8, 2.0);
    const auto d = l1_weights(mesh, 0.999, 8);
    EXPECT_NEAR(d.back() * mesh.tau(8), 1.0, 5e-3);
}

TEST(March, SmallPseudoParabolicTermMatchesPlainL1Scheme) {
    ProblemSpec p;
    p.rho = 0.4;
    p.mu = 1e-14;
    p.T = 1.0;
    p.sigma = [](double) { return 1.0; };
    p.phi = [](double x) { return x * (1.0 - x); };
    p.g = [](double x) { return std::cos(x); };
    p.source_r = [](double t) { return 1.0 + t; };
    const std::size_t N = 16;
    const std::size_t M = 12;
    const SpaceGrid grid(N);
    const TimeMesh mesh(1.0, M);
    const SolutionField f = march(p, grid, mesh);

    // Plain L1 scheme for D^rho u - u_xx = r g, written out with dense solves.
    const double h = grid.h();
    const double G = std::tgamma(2.0 - p.rho);
    std::vector<std::vector<double>> u(M + 1, std::vector<double>(N + 1, 0.0));
    for (std::size_t i = 1; i < N; ++i) {
        u[0][i] = p.phi(grid.x(i));
    }
    for (std::size_t k = 1; k <= M; ++k) {
        const auto d = l1_weights(mesh, p.rho, k);
        std::vector<double> rhs(N - 1);
        for (std::size_t i = 1; i < N; ++i) {
            double hist = d[k - 1] * u[k - 1][i];
            for (std::size_t j = 1; j < k; ++j) {
                hist -= d[j - 1] * (u[j][i] - u[j - 1][i]);
            }
            rhs[i - 1] = hist / G + p.source_r(mesh.t(k)) * p.g(grid.x(i));
        }
        StepSystem s = StepSystem::constant(N - 1, 1.0 / (h * h), d[k - 1] / G + 2.0 / (h * h), rhs);
        const auto x = dense_solve(s);
        for (std::size_t i = 1; i < N; ++i) {
            u[k][i] = x[i - 1];
        }
    }
    for (std::size_t k = 0; k <= M; ++k) {
        for (std::size_t i = 0; i <= N; ++i) {
            EXPECT_NEAR(f.at(i, k), u[k][i], 1e-10);
        }
    }
}

TEST(March, ZeroDataGivesZeroField) {
    ProblemSpec p = worked_example();
    p.phi = [](double) { return 0.0; };
    p.source_r = [](double) { return 0.0; };
    const SolutionField f = march(p, SpaceGrid(50), TimeMesh(p.T, 20, 3.0));
    for (std::size_t k = 0; k <= 20; ++k) {
        for (std::size_t i = 0; i <= 50; ++i) {
            EXPECT_EQ(f.at(i, k), 0.0);
        }
    }
}

TEST(March, ErrorDecreasesWithM) {
    const ProblemSpec p = worked_example();
    double prev = 1e9;
    for (std::size_t M : {50, 100, 200}) {
        const SolutionField f = march(p, SpaceGrid(200), TimeMesh(p.T, M, 3.0));
        const double err = error_report(f, exact).max_err;
        EXPECT_LT(err, prev) << "M=" << M;
        prev = err;
    }
}

TEST(March, DenseCheckAndDominanceStats) {
    const ProblemSpec p = worked_example();
    FdStats stats;
    const TimeMesh mesh(p.T, 30, 3.0);
    const SolutionField f = march(p, SpaceGrid(32), mesh, {true, 1e-10}, &stats);
    EXPECT_EQ(stats.steps_assembled, 30u);
    EXPECT_GT(stats.min_dominance_margin, 0.0);
    EXPECT_LE(stats.max_dense_mismatch, 1e-10);
    for (std::size_t k = 0; k <= 30; ++k) {
        EXPECT_EQ(f.at(0, k), 0.0);
        EXPECT_EQ(f.at(32, k), 0.0);
    }
}

TEST(March, DiscreteSchemeResidualVanishes) {
    const ProblemSpec p = worked_example();
    const std::size_t N = 40;
    const std::size_t M = 25;
    const SpaceGrid grid(N);
    const TimeMesh mesh(p.T, M, 3.0);
    const SolutionField f = march(p, grid, mesh);
    const double h = grid.h();
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t i = 1; i < N; ++i) {
        std::vector<double> u = f.column(i);
        std::vector<double> lap(M + 1);
        for (std::size_t k = 0; k <= M; ++k) {
            lap[k] = (f.at(i + 1, k) - 2.0 * f.at(i, k) + f.at(i - 1, k)) / (h * h);
        }
        const auto du = caputo_l1(u, mesh, p.rho);
        const auto dlap = caputo_l1(lap, mesh, p.rho);
        for (std::size_t k = 1; k <= M; ++k) {
            const double rhs = p.source_r(mesh.t(k)) * p.g(grid.x(i));
            const double res = du[k - 1] - p.mu * dlap[k - 1] - p.sigma(mesh.t(k)) * lap[k] - rhs;
            worst = std::max(worst, std::abs(res));
            scale = std::max(scale, std::abs(rhs));
        }
    }
    EXPECT_LE(worst, 1e-10 * scale);
}

TEST(ErrorReport, Examples) {
    const SpaceGrid grid(10);
    const TimeMesh mesh(1.0, 4);
    SolutionField f(grid, mesh);
    for (std::size_t k = 0; k <= 4; ++k) {
        for (std::size_t i = 0; i <= 10; ++i) {
            f.at(i, k) = exact(grid.x(i), mesh.t(k));
        }
    }
    ErrorReport r = error_report(f, exact);
    EXPECT_EQ(r.max_err, 0.0);
    EXPECT_EQ(r.l2_err, 0.0);
    EXPECT_EQ(r.slices.size(), 5u);
    for (std::size_t k = 0; k <= 4; ++k) {
        for (std::size_t i = 1; i < 10; ++i) {
            f.at(i, k) += 1e-3;
        }
    }
    r = error_report(f, exact);
    EXPECT_NEAR(r.max_err, 1e-3, 1e-15);
}

TEST(BoundaryDerivatives, SecondOrderOneSided) {
    const SpaceGrid grid(400);
    const TimeMesh mesh(2.0, 3);
    SolutionField f(grid, mesh);
    for (std::size_t k = 0; k <= 3; ++k) {
        for (std::size_t i = 0; i <= 400; ++i) {
            f.at(i, k) = exact(grid.x(i), mesh.t(k));
        }
    }
    const auto bd = boundary_derivatives(f);
    for (std::size_t k = 0; k <= 3; ++k) {
        const double t = mesh.t(k);
        // one-sided error ~ h^2 |u_xxx| / 3
        const double tol = 2.0 * pi * pi * pi * (1.0 + t * t) / (3.0 * 400.0 * 400.0);
        EXPECT_NEAR(bd.left[k], 2.0 * pi * (1.0 + t * t), tol);
        EXPECT_NEAR(bd.right[k], -2.0 * pi * (1.0 + t * t), tol);
    }
}
