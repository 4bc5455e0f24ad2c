#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "plap/planecheck.hpp"

using namespace plap;
using namespace plap::planecheck;
using plap::testing::unit_box;
using plap::testing::weight;

TEST(DetIdentity, Examples) {
    EXPECT_NEAR(det_identity_2d(Vec2(1.0, 0.0), 3.0), 2.0, 1e-15);
    EXPECT_NEAR(det_identity_2d(Vec2(0.6, 0.8), 3.0), 2.0, 1e-15);
    EXPECT_NEAR(det_identity_2d(Vec2(0.6, 0.8), 2.0), 1.0, 1e-15);
    EXPECT_NEAR(det_identity_2d(Vec2(0.6, 0.8), 1.5), 0.5, 1e-15);
    EXPECT_THROW(det_identity_2d(Vec2(1.0, 1.0), 3.0), InvalidArgument);
}

TEST(DetIdentity, RandomSamples) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> pd(1.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double t = angle(rng);
        double p = pd(rng);
        if (p == 1.0 || p == 2.0) {
            p = 3.0;
        }
        worst = std::max(worst, std::abs(det_identity_2d(Vec2(std::cos(t), std::sin(t)), p) - (p - 1.0)));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Projector, Examples) {
    EXPECT_LE((projector(Vec2(1.0, 0.0)) - Mat2(Eigen::Vector2d(1.0, 0.0).asDiagonal())).norm(), 0.0);
    Mat2 half;
    half << 0.5, 0.5, 0.5, 0.5;
    EXPECT_LE((projector(Vec2(1.0, 1.0)) - half).norm(), 1e-16);
    EXPECT_THROW(projector(Vec2(0.0, 0.0)), InvalidArgument);
}

TEST(Projector, Idempotent) {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 200; ++k) {
        const Mat2 P = projector(Vec2(nd(rng), nd(rng)));
        EXPECT_LT((P * P - P).norm(), 1e-14);
        EXPECT_NEAR(P.trace(), 1.0, 1e-15);
    }
}

TEST(Residuals, IdentityCandidate) {
    for (double p : {1.5, 3.0, 7.0}) {
        const auto r = fp_identity_residuals({Mat2::Identity(), projector(Vec2(0.3, -0.7)), 1.0, p});
        EXPECT_LT(r.master, 1e-15);
        EXPECT_LT(r.pf_pfp, 1e-15);
        EXPECT_LT(r.fp_pf, 1e-15);
    }
}

TEST(Residuals, ScalarReductionOnEigenspaces) {
    const Mat2 P = projector(Vec2(1.0, 0.0));
    const auto r = fp_identity_residuals({candidate(2.0, 1.0, P), P, 1.0, 3.0});
    EXPECT_NEAR(r.master, 4.0, 1e-14);
    EXPECT_LT(r.fp_pf, 1e-15);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.2, 3.0);
    std::uniform_real_distribution<double> pd(1.1, 9.0);
    for (int k = 0; k < 200; ++k) {
        const double theta = u(rng), eta = u(rng), alpha = u(rng), p = pd(rng);
        const Mat2 Q = projector(Vec2(u(rng) - 1.0, u(rng)));
        const auto res = fp_identity_residuals({candidate(theta, eta, Q), Q, alpha, p});
        const double on_p = theta + alpha * (p - 2.0) * theta * theta - (p - 1.0);
        const double off_p = eta - 1.0;
        EXPECT_NEAR(res.master, std::hypot(on_p, off_p), 1e-12 * (1.0 + std::abs(on_p)));
        EXPECT_LT(res.fp_pf, 1e-14);
        EXPECT_LT(res.pf_pfp, 1e-14);
    }
}

TEST(ThetaEta, AlphaOneIsConsistent) {
    for (double p : {1.2, 1.5, 3.0, 10.0}) {
        const auto s = solve_theta_eta(1.0, p);
        EXPECT_TRUE(s.consistent);
        EXPECT_EQ(s.theta, 1.0);
        EXPECT_EQ(s.eta, 1.0);
        ASSERT_FALSE(s.quadratic_roots.empty());
        EXPECT_NE(std::find_if(s.quadratic_roots.begin(), s.quadratic_roots.end(),
                               [](double r) { return std::abs(r - 1.0) < 1e-12; }),
                  s.quadratic_roots.end());
    }
}

TEST(ThetaEta, OtherAlphaIsInconsistent) {
    const auto s = solve_theta_eta(2.0, 3.0);
    EXPECT_FALSE(s.consistent);
    EXPECT_NEAR(s.defect, 1.0, 1e-15);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> a(0.01, 5.0);
    for (int k = 0; k < 100; ++k) {
        const double alpha = a(rng);
        EXPECT_FALSE(solve_theta_eta(alpha, 2.5 + 0.05 * k).consistent);
    }
    EXPECT_THROW(solve_theta_eta(0.0, 3.0), InvalidArgument);
    EXPECT_THROW(solve_theta_eta(1.0, 2.0), InvalidArgument);
}

TEST(EnergyPairing, ConstantWeightAffineData) {
    const auto d = unit_box(2, 9);
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0]; });
    for (double c : {1.0, 2.0}) {
        const auto g = weight(d, [&](const Vec&) { return c; });
        const auto e = energy_pairing_check(g, 3.0, f);
        EXPECT_NEAR(e.interior, c, 1e-8);
        EXPECT_NEAR(e.boundary, c, 1e-6);
    }
}

TEST(EnergyPairing, GapShrinksUnderRefinement) {
    double prev = 1e300;
    for (int res : {9, 17, 33}) {
        const auto d = unit_box(2, res);
        const auto g = weight(d, [](const Vec& x) { return 1.0 + x[1] * x[1]; });
        const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0] + 0.3 * x[1] * x[1]; });
        const auto e = energy_pairing_check(g, 2.5, f);
        EXPECT_LT(e.relative_gap, prev);
        prev = e.relative_gap;
    }
    EXPECT_LT(prev, 2e-2);
}
