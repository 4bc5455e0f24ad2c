#include <gtest/gtest.h>

#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "helpers.hpp"
#include "plap/psolve.hpp"

using namespace plap;
using plap::testing::max_abs_diff;
using plap::testing::unit_box;
using plap::testing::weight;

namespace {

double gamma_1d(double t) { return 1.0 + 0.5 * std::sin(M_PI * t); }

// u(t) = int_0^t (1 / gamma)^{1/(p-1)}: gamma |u'|^{p-2} u' = 1.
double pseudo_1d(double t, double p) {
    if (t == 0.0) {
        return 0.0;
    }
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate([&](double s) { return std::pow(1.0 / gamma_1d(s), 1.0 / (p - 1.0)); },
                       0.0, t);
}

}  // namespace

TEST(PSolve, AffineDataIsReproduced) {
    for (int n : {2, 3}) {
        for (double p : {1.5, 3.0}) {
            const auto d = unit_box(n, n == 2 ? 17 : 9);
            const auto g = weight(d, [](const Vec&) { return 1.0; });
            auto affine = [](const Vec& x) { return 0.3 + x[0] - 0.4 * x[1]; };
            const auto sol = psolve::solve_p_laplace(g, p, grid::sample_boundary(d, affine));
            EXPECT_LE(max_abs_diff(sol.u, affine), 1e-8);
            EXPECT_LE(sol.residual, 1e-8);
        }
    }
}

TEST(PSolve, AffineDataWithTransverseWeight) {
    const auto d = unit_box(2, 17);
    const auto g = weight(d, [](const Vec& x) { return 1.0 + 0.5 * x[1] * x[1]; });
    auto affine = [](const Vec& x) { return x[0]; };
    const auto sol = psolve::solve_p_laplace(g, 2.5, grid::sample_boundary(d, affine));
    EXPECT_LE(max_abs_diff(sol.u, affine), 1e-8);
}

TEST(PSolve, PseudoOneDimensionalSolutionConverges) {
    for (double p : {1.5, 3.0}) {
        std::vector<double> err;
        for (int r : {9, 17, 33}) {
            const auto d = unit_box(2, r);
            const auto g = weight(d, [](const Vec& x) { return gamma_1d(x[0]); });
            auto exact = [p](const Vec& x) { return pseudo_1d(x[0], p); };
            const auto sol = psolve::solve_p_laplace(g, p, grid::sample_boundary(d, exact));
            err.push_back(max_abs_diff(sol.u, exact));
        }
        for (std::size_t k = 1; k < err.size(); ++k) {
            EXPECT_GE(std::log2(err[k - 1] / err[k]), 1.8) << "p = " << p;
        }
    }
}

TEST(PSolve, SolutionMinimizesEnergy) {
    const auto d = unit_box(2, 9);
    const auto g = weight(d, [](const Vec& x) { return 1.0 + x[0] * x[1]; });
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0] * x[0] - x[1]; });
    const double p = 1.7;
    const auto sol = psolve::solve_p_laplace(g, p, f);
    const double e0 = psolve::p_energy(g, p, sol.u, 1e-8);
    for (grid::NodeId id : d->interior_nodes()) {
        for (double t : {-1e-3, 1e-3}) {
            auto v = sol.u;
            v[id] += t;
            EXPECT_GT(psolve::p_energy(g, p, v, 1e-8), e0);
        }
    }
}

TEST(PSolve, ResidualVanishesAtSolution) {
    const auto d = unit_box(3, 7);
    const auto g = weight(d, [](const Vec& x) { return 2.0 + std::cos(x[2]); });
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0] + 0.2 * x[1] * x[2]; });
    psolve::PSolveConfig cfg;
    cfg.tol = 1e-10;
    const auto sol = psolve::solve_p_laplace(g, 4.0, f, cfg);
    const auto r = psolve::residual(g, 4.0, sol.u, cfg.eps_reg);
    for (double x : r.values()) {
        EXPECT_LE(std::abs(x), 1e-10);
    }
    EXPECT_EQ(sol.residual_history.size(), static_cast<std::size_t>(sol.iterations) + 1);
    EXPECT_TRUE(sol.warnings.empty());
    EXPECT_GT(sol.min_gradient, 0.5);
}

TEST(PSolve, FluxOfLinearData) {
    const auto d = unit_box(2, 9);
    const auto g = weight(d, [](const Vec&) { return 2.0; });
    const double p = 3.0;
    const auto flux =
        psolve::dn_apply(g, p, grid::sample_boundary(d, [](const Vec& x) { return x[0]; }));
    const auto& faces = d->faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const double expect = faces[fi].axis == 0 ? 2.0 * faces[fi].side : 0.0;
        for (double v : flux.face(fi)) {
            EXPECT_NEAR(v, expect, 1e-8);
        }
    }
}

TEST(PSolve, DnMapIsHomogeneous) {
    // Lambda(t f) = t^{p-1} Lambda(f).
    const auto d = unit_box(2, 13);
    const auto g = weight(d, [](const Vec& x) { return 1.0 + 0.3 * x[0]; });
    const double p = 2.5;
    auto f = [](const Vec& x) { return x[0] + 0.5 * std::sin(x[1]); };
    psolve::PSolveConfig cfg;
    cfg.tol = 1e-11;
    const auto base = psolve::dn_apply(g, p, grid::sample_boundary(d, f), cfg);
    const auto scaled = psolve::dn_apply(
        g, p, grid::sample_boundary(d, [&](const Vec& x) { return 2.0 * f(x); }), cfg);
    EXPECT_LE((scaled - std::pow(2.0, p - 1.0) * base).max_abs(), 1e-8);
}

TEST(PSolve, Contracts) {
    const auto d = unit_box(2, 5);
    const auto g = weight(d, [](const Vec&) { return 1.0; });
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return x[0]; });
    EXPECT_THROW(psolve::solve_p_laplace(g, 1.0, f), InvalidArgument);
    EXPECT_THROW(psolve::solve_p_laplace(g, std::nan(""), f), InvalidArgument);
    psolve::PSolveConfig bad;
    bad.tol = 0.0;
    EXPECT_THROW(psolve::solve_p_laplace(g, 3.0, f, bad), InvalidArgument);
    const auto other = unit_box(2, 5);
    EXPECT_THROW(
        psolve::solve_p_laplace(g, 3.0, grid::sample_boundary(other, [](const Vec&) { return 0.0; })),
        InvalidArgument);
}

TEST(PSolve, BudgetExhaustionReportsHistory) {
    const auto d = unit_box(2, 17);
    const auto g = weight(d, [](const Vec& x) { return 1.0 + 10.0 * x[0] * x[0]; });
    const auto f = grid::sample_boundary(d, [](const Vec& x) { return std::sin(6.0 * x[0] * x[1]); });
    psolve::PSolveConfig cfg;
    cfg.max_newton = 1;
    cfg.tol = 1e-14;
    try {
        psolve::solve_p_laplace(g, 6.0, f, cfg);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_FALSE(e.history().empty());
        EXPECT_EQ(e.kind(), "NonConvergence");
    }
}

TEST(PSolve, ZeroDataGivesZeroSolutionWithWarning) {
    const auto d = unit_box(2, 5);
    const auto g = weight(d, [](const Vec&) { return 1.0; });
    const auto sol = psolve::solve_p_laplace(g, 3.0, grid::BoundaryData(d));
    EXPECT_LE(max_abs_diff(sol.u, [](const Vec&) { return 0.0; }), 0.0);
    ASSERT_FALSE(sol.warnings.empty());
    EXPECT_NE(sol.warnings[0].find("DegenerateGradient"), std::string::npos);
}
