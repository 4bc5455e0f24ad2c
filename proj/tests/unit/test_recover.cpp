#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "plap/recover.hpp"

using namespace plap;
using namespace plap::recover;

namespace {

Vec unit3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v / v.norm();
}

Scenario tilted(const std::string& profile, double p, int order = 6) {
    Scenario sc;
    sc.profile = profile;
    sc.p = p;
    sc.c = 1.0;
    sc.zeta = unit3(0.8, 0.36, 0.48);
    sc.z = Vec::Zero(3);
    sc.order = order;
    return sc;
}

// |a - b| relative to |b|, falling back to an absolute comparison for exact zeros.
double rel_err(double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Oracle, ConstantProfileIsLinear) {
    auto sc = tilted("1", 3.0);
    sc.z = unit3(0.0, 1.0, 2.0);
    const auto o = oracle_tilted_profile(sc);
    EXPECT_NEAR(o.gamma.value(), 1.0, 0.0);
    EXPECT_NEAR(o.u.value(), sc.zeta.dot(sc.z), 1e-15);
    for (std::size_t k = 1; k < o.gamma.size(); ++k) {
        EXPECT_EQ(o.gamma.coefficients()[k], 0.0);
    }
    for (std::size_t k = 1; k < o.u.size(); ++k) {
        const auto& a = o.u.index(k);
        const int deg = a[0] + a[1] + a[2];
        const double want = deg == 1 ? sc.zeta[a[0] == 1 ? 0 : (a[1] == 1 ? 1 : 2)] : 0.0;
        EXPECT_NEAR(o.u.coefficients()[k], want, 1e-15);
    }
}

TEST(Oracle, LinearProfileMatchesClosedForm) {
    // G'(s) = (1 + 0.1 s)^{-1/2} for p = 3, c = 1; along e1 the jet of G(zeta.x)
    // has d1^k u = zeta1^k G^{(k)}(0).
    const auto sc = tilted("1+0.1*x1", 3.0);
    const auto o = oracle_tilted_profile(sc);
    const double z1 = sc.zeta[0];
    double falling = 1.0;  // (-1/2)(-3/2)... for G^{(k)} = falling * 0.1^{k-1}
    for (int k = 1; k <= 7; ++k) {
        const double gk = falling * std::pow(0.1, k - 1);
        EXPECT_LE(rel_err(o.u.derivative({k, 0, 0}), gk * std::pow(z1, k)), 1e-12) << k;
        falling *= -0.5 - (k - 1);
    }
    EXPECT_LE(rel_err(o.gamma.derivative({1, 0, 0}), 0.1 * z1), 1e-15);
}

TEST(Oracle, SolvesTheEquationExactly) {
    for (double p : {1.3, 2.5, 6.0}) {
        const auto o = oracle_tilted_profile(tilted("2+sin(x1)", p));
        const Jet r = pde_residual(o.gamma, o.u, p);
        for (double c : r.coefficients()) {
            EXPECT_LE(std::abs(c), 1e-11);
        }
    }
}

TEST(Synthesize, ConstantProfile) {
    const auto sc = tilted("1", 2.5);
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            const double want = (j == k ? 1.0 : 0.0) + (sc.p - 2.0) * sc.zeta[j] * sc.zeta[k];
            EXPECT_NEAR(bj.A[j][k].value(), want, 1e-15);
            for (std::size_t i = 1; i < bj.A[j][k].size(); ++i) {
                EXPECT_NEAR(bj.A[j][k].coefficients()[i], 0.0, 1e-15);
            }
        }
    }
}

TEST(Synthesize, IsotropicAtPEqualsTwo) {
    const auto o = oracle_tilted_profile(tilted("1+0.2*x1^2", 2.0));
    const auto bj = synthesize_measurements(o.gamma, o.u, 2.0);
    EXPECT_LE(jets::max_difference(bj.A[0][0], o.gamma), 1e-15);
    EXPECT_LE(jets::max_difference(bj.A[1][2], Jet(3, o.gamma.order())), 1e-15);
}

TEST(Synthesize, FluxTraceIsConstant) {
    auto sc = tilted("1+0.3*x1", 2.5);
    sc.c = 1.7;
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    EXPECT_NEAR(bj.flux.value(), sc.c * sc.zeta[0], 1e-14);
    for (std::size_t i = 1; i < bj.flux.size(); ++i) {
        EXPECT_NEAR(bj.flux.coefficients()[i], 0.0, 1e-13);
    }
}

TEST(Order0, RecoversPointValues) {
    const auto sc = tilted("1+0.1*x1", 3.0);
    const auto o = oracle_tilted_profile(sc);
    const auto r = recover_order0(synthesize_measurements(o.gamma, o.u, sc.p));
    EXPECT_NEAR(r.gamma, 1.0, 1e-14);
    EXPECT_NEAR(r.d1u, sc.zeta[0], 1e-14);
    EXPECT_NEAR(r.grad_norm, 1.0, 1e-14);
}

TEST(Order0, TwoDimensions) {
    Scenario sc;
    sc.profile = "exp(0.3*x1)";
    sc.p = 1.6;
    sc.zeta = Vec(2);
    sc.zeta << 0.6, 0.8;
    sc.z = Vec(2);
    sc.z << 0.0, 0.5;
    sc.order = 4;
    const auto o = oracle_tilted_profile(sc);
    const auto r = recover_order0(synthesize_measurements(o.gamma, o.u, sc.p));
    EXPECT_LE(rel_err(r.gamma, o.gamma.value()), 1e-13);
    EXPECT_LE(rel_err(r.d1u, o.u.derivative({1, 0, 0})), 1e-13);
    EXPECT_LE(jets::max_difference(r.gamma_trace, jets::slice(o.gamma, 0)), 1e-13);
}

TEST(Order0, NormalZetaIsTangentiallyDegenerate) {
    auto sc = tilted("1", 3.0);
    sc.zeta = unit3(1.0, 0.0, 0.0);
    const auto o = oracle_tilted_profile(sc);
    EXPECT_THROW(recover_order0(synthesize_measurements(o.gamma, o.u, sc.p)),
                 TangentialDegenerate);
}

TEST(Order0, SensitivityToFlux) {
    const auto sc = tilted("1+0.1*x1", 3.0);
    const auto o = oracle_tilted_profile(sc);
    auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    const double base = recover_order0(bj).gamma;
    std::vector<double> shifts;
    for (double delta : {1e-3, 1e-4, 1e-5}) {
        auto moved = bj;
        moved.flux.coefficients()[0] += delta;
        shifts.push_back(std::abs(recover_order0(moved).gamma - base) / delta);
    }
    // Linear response: the difference quotients agree.
    EXPECT_NEAR(shifts[0], shifts[2], 1e-3 * shifts[2]);
    EXPECT_GT(shifts[2], 0.0);
}

TEST(Theta, CanonicalPoint) {
    Vec g(3);
    g << 1.0, 0.0, 0.0;
    const auto t = theta_matrix(1.0, g, 3.0, 1);
    Eigen::Matrix3d want;
    want << 1, 2, 0, 2, 2, 2, 1, 1, -1;
    EXPECT_LE((t - want).norm(), 1e-15);
    EXPECT_EQ(theta_det_direct(t), 4.0);
    EXPECT_EQ(theta_det_paper(1.0, g, 3.0), 6.0);
    EXPECT_EQ(theta_det_factored(1.0, g, 3.0), 4.0);
}

TEST(Theta, PEqualsTwo) {
    Vec g(3);
    g << 1.0, 0.0, 0.0;
    const auto t = theta_matrix(1.0, g, 2.0, 1);
    EXPECT_EQ(t(1, 1), 0.0);
    EXPECT_EQ(t(2, 1), 0.0);
    EXPECT_EQ(theta_det_direct(t), 2.0);
    EXPECT_EQ(theta_det_paper(1.0, g, 2.0), 2.0);
}

TEST(Theta, NormalGradientZero) {
    Vec g(3);
    g << 0.0, 1.0, 0.0;
    EXPECT_THROW(theta_matrix(1.0, g, 3.0, 2), NormalGradientZero);
}

TEST(Theta, FactoredFormEqualsCofactorExpansion) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::uniform_real_distribution<double> pd(1.05, 9.0);
    for (int trial = 0; trial < 500; ++trial) {
        Vec g(3);
        g << u(rng), u(rng), 0.0;
        const double gamma = 0.5 + u(rng);
        const double p = pd(rng);
        const double direct = theta_det_direct(theta_matrix(gamma, g, p, 2));
        EXPECT_NEAR(direct, theta_det_factored(gamma, g, p), 1e-11 * std::abs(direct));
    }
}

TEST(Theta, AffineProbingReproducesEntries) {
    // gamma(z) = 2, grad u0(z) = (0.8, 0.6, 0): profile 2 + 0.1 s, c = 2 so G'(0) = 1.
    Scenario sc;
    sc.profile = "2+0.1*x1";
    sc.c = 2.0;
    sc.p = 2.5;
    sc.zeta = unit3(0.8, 0.6, 0.0);
    sc.z = Vec::Zero(3);
    sc.order = 3;
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    const auto st = start_recovery(bj);
    const auto sys = build_theta_system(st, bj, 1);
    const auto want = theta_matrix(2.0, sc.zeta, sc.p, 2);
    EXPECT_LE((sys.theta - want).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(std::abs(sys.tangent[2]), 1.0, 1e-15);
}

TEST(Theta, RotatedTangentMatchesRotatedFormula) {
    const auto sc = tilted("1+0.2*x1", 3.0);
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    const auto st = start_recovery(bj);
    const auto sys = build_theta_system(st, bj, 1);
    Vec rotated(3);
    rotated << sc.zeta[0], std::hypot(sc.zeta[1], sc.zeta[2]), 0.0;
    const auto want = theta_matrix(1.0, rotated, sc.p, 2);
    EXPECT_LE((sys.theta - want).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(sys.tangent.dot(sc.zeta), 0.0, 1e-15);
}

TEST(Affine, ProbingIsExact) {
    const Jet shape(2, 3);
    const Jet c1 = 1.0 + Jet::variable(2, 3, 0, 0.0);
    const Jet c2 = jets::exp(Jet::variable(2, 3, 1, 0.2));
    const Jet off = jets::sin(Jet::variable(2, 3, 0, 0.5));
    const ForwardMap f = [&](const Jet& a, const Jet& b) {
        return std::vector<Jet>{off + c1 * a + c2 * b, 2.0 * a - b};
    };
    const auto m = extract_affine_coefficients(f, shape);
    const Jet a = 2.5 + Jet::variable(2, 3, 1, 0.0);
    const Jet b = Jet::constant(2, 3, -1.3);
    const auto want = f(a, b);
    const auto got = m.apply(a, b);
    for (std::size_t r = 0; r < want.size(); ++r) {
        EXPECT_LE(jets::max_difference(got[r], want[r]), 1e-15);
    }
}

TEST(Affine, ConstantProfileHasHomogeneousSystem) {
    const auto sc = tilted("1", 1.7);
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    const auto st = start_recovery(bj);
    for (std::size_t r = 0; r < 3; ++r) {
        for (double c : build_theta_system(st, bj, 1).rhs_jets[r].coefficients()) {
            EXPECT_LE(std::abs(c), 1e-14);
        }
    }
}

TEST(Recover, ConstantProfileGivesZeroJets) {
    const auto sc = tilted("1", 3.0, 5);
    const auto o = oracle_tilted_profile(sc);
    const auto st = recover_all(synthesize_measurements(o.gamma, o.u, sc.p));
    for (int m = 1; m <= 5; ++m) {
        EXPECT_LE(std::abs(st.gamma.coefficient({m, 0, 0})), 1e-14);
    }
}

TEST(Recover, LinearProfileChainRule) {
    const auto sc = tilted("1+0.1*x1", 3.0, 6);
    const auto o = oracle_tilted_profile(sc);
    const auto st = recover_all(synthesize_measurements(o.gamma, o.u, sc.p));
    EXPECT_LE(rel_err(st.gamma.derivative({1, 0, 0}), 0.1 * sc.zeta[0]), 1e-8);
    for (int m = 2; m <= 6; ++m) {
        EXPECT_LE(std::abs(st.gamma.derivative({m, 0, 0})), 1e-12);
    }
}

TEST(Recover, ExponentialProfileChainRule) {
    auto sc = tilted("exp(0.2*x1)", 1.5, 6);
    sc.z = unit3(0.0, 0.3, -0.4) * 0.5;
    const auto o = oracle_tilted_profile(sc);
    const auto st = recover_all(synthesize_measurements(o.gamma, o.u, sc.p));
    const double s0 = sc.zeta.dot(sc.z);
    for (int m = 0; m <= 6; ++m) {
        const double want = std::pow(0.2 * sc.zeta[0], m) * std::exp(0.2 * s0);
        EXPECT_LE(rel_err(st.gamma.derivative({m, 0, 0}), want), 1e-7) << m;
    }
    for (double g : st.gauge_residuals) {
        EXPECT_LT(g, 1e-8);
    }
}

TEST(Recover, ModeAFillsEveryCoefficient) {
    for (double p : {1.3, 1.7, 2.5, 3.0, 6.0}) {
        const auto sc = tilted("2+sin(x1)", p, 6);
        const auto o = oracle_tilted_profile(sc);
        const auto st = recover_all(synthesize_measurements(o.gamma, o.u, p));
        EXPECT_LE(jets::max_difference(st.gamma, o.gamma), 1e-10) << p;
        EXPECT_LE(jets::max_difference(st.u, o.u), 1e-10) << p;
        EXPECT_EQ(st.conditions.size(), 6u);
        EXPECT_EQ(st.completed, 6);
    }
}

TEST(Recover, ModeBAgreesWithModeA) {
    const auto sc = tilted("1/(1+0.2*x1^2)", 2.5, 5);
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    RecoverConfig b;
    b.mode = RecoverConfig::Mode::B;
    const auto sa = recover_all(bj);
    const auto sb = recover_all(bj, b, &o);
    for (int m = 0; m <= 5; ++m) {
        EXPECT_NEAR(sa.gamma.coefficient({m, 0, 0}), sb.gamma.coefficient({m, 0, 0}), 1e-12);
    }
    EXPECT_THROW(recover_all(bj, b, nullptr), InvalidArgument);
}

TEST(Recover, ConditionBoundIsEnforced) {
    const auto sc = tilted("1+0.1*x1", 6.0, 2);
    const auto o = oracle_tilted_profile(sc);
    RecoverConfig cfg;
    cfg.condition_bound = 1.5;
    try {
        recover_all(synthesize_measurements(o.gamma, o.u, sc.p), cfg);
        FAIL() << "expected IllConditioned";
    } catch (const IllConditioned& e) {
        EXPECT_EQ(e.order(), 1);
        EXPECT_GT(e.condition(), 1.5);
    }
}

TEST(Recover, StateOrderingContract) {
    const auto sc = tilted("1+0.1*x1", 3.0, 3);
    const auto o = oracle_tilted_profile(sc);
    const auto bj = synthesize_measurements(o.gamma, o.u, sc.p);
    const auto st = start_recovery(bj);
    EXPECT_THROW(recover_order_m(st, bj, 2), InvalidArgument);
}

TEST(Taylor, ReconstructionWithinRemainder) {
    auto sc = tilted("exp(0.2*x1)", 3.0, 6);
    const auto o = oracle_tilted_profile(sc);
    const auto st = recover_all(synthesize_measurements(o.gamma, o.u, sc.p));
    const double s = 0.3;
    const double got = taylor_reconstruct(st, {s})[0];
    const double truth = std::exp(0.2 * (sc.zeta.dot(sc.z) - s * sc.zeta[0]));
    const double a = 0.2 * sc.zeta[0] * s;
    const double bound = std::pow(a, 7) / jets::factorial(7) * std::exp(a);
    EXPECT_LE(std::abs(got - truth), bound);
}

TEST(Taylor, LinearAndConstantProfiles) {
    const auto lin = tilted("1+0.1*x1", 3.0, 4);
    const auto o = oracle_tilted_profile(lin);
    const auto st = recover_all(synthesize_measurements(o.gamma, o.u, lin.p));
    const auto vals = taylor_reconstruct(st, {0.1, 0.5, 2.0});
    for (std::size_t k = 0; k < vals.size(); ++k) {
        const double s = std::vector<double>{0.1, 0.5, 2.0}[k];
        EXPECT_NEAR(vals[k], 1.0 - 0.1 * s * lin.zeta[0], 1e-13);
    }
    const auto con = tilted("3", 3.0, 4);
    const auto oc = oracle_tilted_profile(con);
    const auto sc = recover_all(synthesize_measurements(oc.gamma, oc.u, con.p));
    for (double v : taylor_reconstruct(sc, {0.2, 1.0})) {
        EXPECT_NEAR(v, 3.0, 1e-13);
    }
}

TEST(Scenario, Validation) {
    auto sc = tilted("1", 3.0);
    sc.zeta *= 2.0;
    EXPECT_THROW(sc.validate(), InvalidArgument);
    sc = tilted("1", 1.0);
    EXPECT_THROW(sc.validate(), InvalidArgument);
    sc = tilted("x2", 3.0);
    EXPECT_THROW(oracle_tilted_profile(sc), InvalidArgument);
}
