#include "tfpp/tfpp.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace tfpp;

TEST(Reproduce, WorkedExample) {
    const auto dir = std::filesystem::temp_directory_path() / "tfpp_reproduce_test";
    const ReproduceReport r = reproduce_paper(dir.string(), 0);
    EXPECT_NEAR(r.fd_mid_start, 2.0, 1e-12);
    EXPECT_NEAR(r.spectral_mid_start, 2.0, 1e-9);
    EXPECT_NEAR(r.fd_mid_end, 52.0, 0.05);
    EXPECT_NEAR(r.spectral_mid_end, 52.0, 0.05);
    EXPECT_EQ(r.boundary_max, 0.0);
    EXPECT_EQ(r.files.size(), 4u);
    for (const auto& f : r.files) {
        EXPECT_TRUE(std::filesystem::exists(f)) << f;
    }
    const auto slice = read_table((dir / "final_slice.csv").string());
    EXPECT_EQ(slice.at("x").size(), 1001u);
    std::filesystem::remove_all(dir);
}

TEST(Convergence, ZeroSolutionHasNoOrders) {
    RunConfig c;
    c.rho = 0.5;
    c.mu = 1.0;
    c.T = 1.0;
    c.N = 8;
    c.M = 8;
    c.sigma = "1";
    c.phi = "0";
    c.g = "sin(pi*x)";
    c.r = "0";
    c.u_exact = "0";
    const ConvergenceTable tab = convergence_study(c, 2);
    for (const auto* levels : {&tab.temporal, &tab.spatial}) {
        for (const auto& l : *levels) {
            EXPECT_EQ(l.max_err, 0.0);
            EXPECT_FALSE(l.order.has_value());
            EXPECT_FALSE(l.richardson.has_value());
        }
    }
}

TEST(Convergence, SpatialOrderNearTwo) {
    RunConfig c = RunConfig::load(std::string(TFPP_CONFIG_DIR) + "/manufactured.cfg");
    const ConvergenceTable tab = convergence_study(c, 0);
    ASSERT_EQ(tab.spatial.size(), 3u);
    for (std::size_t l = 1; l < 3; ++l) {
        ASSERT_TRUE(tab.spatial[l].order.has_value());
        EXPECT_GE(*tab.spatial[l].order, 1.8);
        EXPECT_LE(*tab.spatial[l].order, 2.2);
    }
    ASSERT_TRUE(tab.temporal[2].richardson.has_value());
    EXPECT_GE(*tab.temporal[2].richardson, 1.4);
}
