#include "plap/recover.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace plap::recover {

using jets::factorial;
using jets::partial;
using jets::slice;

void Scenario::validate() const {
    const auto n = zeta.size();
    if (n != 2 && n != 3) {
        throw InvalidArgument("scenario dimension must be 2 or 3");
    }
    if (z.size() != n) {
        throw InvalidArgument("boundary point and zeta differ in dimension");
    }
    if (std::abs(zeta.norm() - 1.0) > 1e-12) {
        throw InvalidArgument("zeta must be a unit vector");
    }
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("flux constant c must be positive");
    }
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("p must be greater than 1");
    }
    if (order < 0) {
        throw InvalidArgument("jet order must be non-negative");
    }
}

OracleJets oracle_tilted_profile(const Scenario& sc) {
    sc.validate();
    const auto expr = jets::parse_expr(sc.profile);
    if (jets::variable_count(expr) > 1) {
        throw InvalidArgument("the profile may only use x1 (standing for zeta.x)");
    }
    const int n = static_cast<int>(sc.zeta.size());
    const int N = sc.order;
    const double s0 = sc.zeta.dot(sc.z);

    // G on the line, as a univariate jet at s0.
    const Jet t = Jet::variable(1, N, 0, s0);
    const Jet prof = jets::eval(expr, std::span(&t, 1));
    const Jet gp = jets::pow(sc.c / prof, 1.0 / (sc.p - 1.0));
    const Jet g = jets::integrate(gp, s0);

    Jet s = Jet::constant(n, N + 1, s0);
    for (int k = 0; k < n; ++k) {
        s += sc.zeta[k] * Jet::variable(n, N + 1, k, 0.0);
    }
    const Jet s_low = s.truncate(N);
    OracleJets out;
    out.gamma = jets::eval(expr, std::span(&s_low, 1));
    out.u = jets::compose(g.coefficients(), s);
    if (!(out.gamma.value() > 0.0)) {
        throw DomainError("profile is not positive at the boundary point");
    }
    return out;
}

namespace {

struct Derived {
    std::vector<Jet> grad;
    Jet coef;  // gamma |grad u|^{p-2}
    Jet s2;    // |grad u|^2
};

Derived derive(const Jet& gamma, const Jet& u, double p) {
    if (gamma.nvars() != u.nvars() || gamma.order() + 1 != u.order()) {
        throw InvalidArgument("gamma must be one order below u0");
    }
    Derived d;
    d.s2 = Jet(u.nvars(), gamma.order());
    for (int k = 0; k < u.nvars(); ++k) {
        d.grad.push_back(partial(u, k));
        d.s2 += d.grad.back() * d.grad.back();
    }
    d.coef = gamma * jets::pow(d.s2, 0.5 * (p - 2.0));
    return d;
}

std::array<std::array<Jet, 3>, 3> tensor(const Derived& d, double p) {
    const int n = static_cast<int>(d.grad.size());
    std::array<std::array<Jet, 3>, 3> a;
    const Jet scaled = (p - 2.0) * d.coef / d.s2;
    for (int j = 0; j < n; ++j) {
        for (int k = j; k < n; ++k) {
            Jet v = scaled * d.grad[static_cast<std::size_t>(j)] *
                    d.grad[static_cast<std::size_t>(k)];
            if (j == k) {
                v += d.coef;
            }
            a[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = v;
            a[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = v;
        }
    }
    return a;
}

Jet divergence(const Derived& d) {
    const int n = static_cast<int>(d.grad.size());
    Jet out = partial(d.coef * d.grad[0], 0);
    for (int k = 1; k < n; ++k) {
        out += partial(d.coef * d.grad[static_cast<std::size_t>(k)], k);
    }
    return out;
}

// Unit tangent perpendicular to grad' u0 as jets (components 2 and 3) of
// the given order, from the Dirichlet trace. Throws TangentialDegenerate.
std::array<Jet, 2> perpendicular_tangent(const BoundaryJets& bj, int order, double tol) {
    const Jet d2 = partial(bj.dirichlet, 0);
    const Jet d3 = partial(bj.dirichlet, 1);
    const Jet norm = jets::sqrt(d2 * d2 + d3 * d3);
    if (!(norm.value() > tol)) {
        std::ostringstream msg;
        msg << "tangential gradient of the trace is " << norm.value() << " at z";
        throw TangentialDegenerate(msg.str());
    }
    return {(-d3 / norm).truncate(order), (d2 / norm).truncate(order)};
}

Jet contract(const std::array<Jet, 2>& t, const Jet& a22, const Jet& a23, const Jet& a33) {
    return t[0] * t[0] * a22 + 2.0 * t[0] * t[1] * a23 + t[1] * t[1] * a33;
}

Jet det3(const std::array<std::array<Jet, 3>, 3>& col) {
    // col[c][r]
    const auto& m = col;
    return m[0][0] * (m[1][1] * m[2][2] - m[2][1] * m[1][2]) -
           m[1][0] * (m[0][1] * m[2][2] - m[2][1] * m[0][2]) +
           m[2][0] * (m[0][1] * m[1][2] - m[1][1] * m[0][2]);
}

double max_abs(const Jet& j) {
    double m = 0.0;
    for (double c : j.coefficients()) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

}  // namespace

Jet pde_residual(const Jet& gamma, const Jet& u, double p) {
    return divergence(derive(gamma, u, p));
}

BoundaryJets synthesize_measurements(const Jet& gamma, const Jet& u, double p) {
    const Derived d = derive(gamma, u, p);
    if (!(d.s2.value() > 0.0)) {
        throw DegenerateGradient("grad u0 vanishes at the boundary point");
    }
    BoundaryJets bj;
    bj.nvars = u.nvars();
    bj.order = gamma.order();
    bj.p = p;
    bj.A = tensor(d, p);
    bj.dirichlet = slice(u, 0);
    bj.flux = slice(d.coef * d.grad[0], 0);
    return bj;
}

Order0 recover_order0(const BoundaryJets& bj, const RecoverConfig& cfg) {
    const double p = bj.p;
    if (p == 2.0) {
        throw InvalidArgument("order-0 recovery needs p != 2");
    }
    const int N = bj.order;
    const Jet a11 = slice(bj.A[0][0], 0);
    const Jet a12 = slice(bj.A[0][1], 0);
    const Jet a22 = slice(bj.A[1][1], 0);

    Jet t2;  // |grad' u0|^2
    Jet K;   // gamma |grad u0|^{p-2}
    Jet Q;   // A along grad' u0
    if (bj.nvars == 2) {
        const Jet d2 = partial(bj.dirichlet, 0);
        if (!(std::abs(d2.value()) > cfg.tangential_tol)) {
            throw TangentialDegenerate("tangential derivative of the trace vanishes at z");
        }
        t2 = d2 * d2;
        K = jets::sqrt((a11 * a22 - a12 * a12) / (p - 1.0));
        Q = a22;
    } else {
        const Jet a23 = slice(bj.A[1][2], 0);
        const Jet a33 = slice(bj.A[2][2], 0);
        const auto perp = perpendicular_tangent(bj, N, cfg.tangential_tol);
        const std::array<Jet, 2> along{perp[1], -perp[0]};
        const Jet d2 = partial(bj.dirichlet, 0);
        const Jet d3 = partial(bj.dirichlet, 1);
        t2 = d2 * d2 + d3 * d3;
        K = contract(perp, a22, a23, a33);
        Q = contract(along, a22, a23, a33);
    }
    const Jet g2 = (p - 2.0) * t2 / (Q / K - 1.0);
    const Jet u1sq = g2 - t2;
    const double f0 = bj.flux.value();
    if (!(u1sq.value() > cfg.normal_tol * cfg.normal_tol * g2.value()) || f0 == 0.0) {
        std::ostringstream msg;
        msg << "normal derivative of u0 vanishes at z (d1u^2 = " << u1sq.value() << ")";
        throw NormalGradientZero(msg.str());
    }
    Order0 out;
    out.d1u_trace = (f0 > 0.0 ? 1.0 : -1.0) * jets::sqrt(u1sq);
    out.gamma_trace = bj.flux / (jets::pow(g2, 0.5 * (p - 2.0)) * out.d1u_trace);
    out.gamma = out.gamma_trace.value();
    out.d1u = out.d1u_trace.value();
    out.grad_norm = std::sqrt(g2.value());
    return out;
}

Eigen::Matrix3d theta_matrix(double gamma, const Vec& grad, double p, int j) {
    if (j < 1 || j >= grad.size()) {
        throw InvalidArgument("theta_matrix: j must be a tangential axis");
    }
    const double u1 = grad[0];
    const double s2 = grad.squaredNorm();
    if (u1 == 0.0 || s2 == 0.0) {
        throw NormalGradientZero("theta system needs d1 u0 != 0");
    }
    const double uj = grad[j];
    const double pw = std::pow(s2, 0.5 * (p - 2.0));
    const double pw4 = std::pow(s2, 0.5 * (p - 4.0));
    const double r1 = u1 * u1 / s2;
    const double rj = uj * uj / s2;
    Eigen::Matrix3d t;
    t(0, 0) = u1 * pw;
    t(0, 1) = gamma * pw * (1.0 + (p - 2.0) * r1);
    t(0, 2) = 0.0;
    t(1, 0) = pw * (1.0 + (p - 2.0) * r1);
    t(1, 1) = gamma * u1 * pw4 * (p - 2.0) * (3.0 + (p - 4.0) * r1);
    t(1, 2) = gamma * pw * (1.0 + (p - 2.0) * r1);
    t(2, 0) = pw * (1.0 + (p - 2.0) * rj);
    t(2, 1) = gamma * u1 * pw4 * (p - 2.0) * (1.0 + (p - 4.0) * rj);
    t(2, 2) = -gamma * pw * (1.0 + (p - 2.0) * rj);
    return t;
}

double theta_det_direct(const Eigen::Matrix3d& t) {
    return t(0, 0) * (t(1, 1) * t(2, 2) - t(1, 2) * t(2, 1)) -
           t(0, 1) * (t(1, 0) * t(2, 2) - t(1, 2) * t(2, 0)) +
           t(0, 2) * (t(1, 0) * t(2, 1) - t(1, 1) * t(2, 0));
}

double theta_det_paper(double gamma, const Vec& grad, double p) {
    const double s2 = grad.squaredNorm();
    const double u1 = grad[0];
    const double lambda = gamma * gamma * std::pow(s2, 0.5 * (3.0 * p - 8.0));
    return lambda * (2.0 * s2 + (p - 2.0) * u1 * u1 + p * (p - 2.0) * std::pow(u1, 4) / s2);
}

double theta_det_factored(double gamma, const Vec& grad, double p) {
    const double s2 = grad.squaredNorm();
    const double u1 = grad[0];
    const double lambda = gamma * gamma * std::pow(s2, 0.5 * (3.0 * p - 8.0));
    return lambda * 2.0 * (s2 + (p - 2.0) * std::pow(u1, 4) / s2);
}

std::vector<Jet> AffineMap::apply(const Jet& xi1, const Jet& xi2) const {
    std::vector<Jet> out;
    for (std::size_t r = 0; r < offset.size(); ++r) {
        out.push_back(offset[r] + col1[r] * xi1 + col2[r] * xi2);
    }
    return out;
}

AffineMap extract_affine_coefficients(const ForwardMap& f, const Jet& shape) {
    const Jet zero(shape.nvars(), shape.order());
    const Jet one = Jet::constant(shape.nvars(), shape.order(), 1.0);
    AffineMap m;
    m.offset = f(zero, zero);
    const auto e1 = f(one, zero);
    const auto e2 = f(zero, one);
    if (e1.size() != m.offset.size() || e2.size() != m.offset.size()) {
        throw InvalidArgument("forward map returned rows of varying count");
    }
    for (std::size_t r = 0; r < m.offset.size(); ++r) {
        m.col1.push_back(e1[r] - m.offset[r]);
        m.col2.push_back(e2[r] - m.offset[r]);
    }
    return m;
}

RecoveryState start_recovery(const BoundaryJets& bj, const RecoverConfig& cfg) {
    RecoveryState st;
    st.nvars = bj.nvars;
    st.order = bj.order;
    st.p = bj.p;
    st.order0 = recover_order0(bj, cfg);
    st.gamma = Jet(bj.nvars, bj.order);
    st.u = Jet(bj.nvars, bj.order + 1);
    jets::set_slice(st.gamma, 0, st.order0.gamma_trace);
    jets::set_slice(st.u, 0, bj.dirichlet);
    jets::set_slice(st.u, 1, st.order0.d1u_trace);
    st.completed = 0;
    return st;
}

ThetaSystem build_theta_system(const RecoveryState& state, const BoundaryJets& bj, int m) {
    if (bj.nvars != 3) {
        throw InvalidArgument("normal orders m >= 1 are recovered for n = 3 only");
    }
    if (m < 1 || m > bj.order) {
        throw InvalidArgument("order m out of range");
    }
    if (state.completed != m - 1) {
        throw InvalidArgument("state is not complete through order m - 1");
    }
    const int N = bj.order;
    const int top = N - m;
    const double p = bj.p;
    const auto perp = perpendicular_tangent(bj, N, 0.0);
    const std::array<Jet, 2> tp{perp[0].truncate(top), perp[1].truncate(top)};
    const double fm = factorial(m);
    const double fm1 = factorial(m + 1);

    std::array<Jet, 3> meas{
        Jet(2, top), fm * slice(bj.A[0][0], m),
        fm * contract(tp, slice(bj.A[1][1], m), slice(bj.A[1][2], m), slice(bj.A[2][2], m))};

    const ForwardMap forward = [&](const Jet& xi1, const Jet& xi2) {
        Jet g = state.gamma;
        Jet u = state.u;
        jets::set_slice(g, m, xi1 / fm);
        jets::set_slice(u, m + 1, xi2 / fm1);
        const Derived d = derive(g, u, p);
        const auto a = tensor(d, p);
        std::vector<Jet> rows;
        rows.push_back(factorial(m - 1) * slice(divergence(d), m - 1) - meas[0]);
        rows.push_back(fm * slice(a[0][0], m) - meas[1]);
        rows.push_back(fm * contract(tp, slice(a[1][1], m), slice(a[1][2], m), slice(a[2][2], m)) -
                       meas[2]);
        return rows;
    };
    const AffineMap aff = extract_affine_coefficients(forward, Jet(2, top));

    ThetaSystem sys;
    sys.order = m;
    const Jet a11_0 = slice(bj.A[0][0], 0).truncate(top);
    const Jet perp_0 =
        contract(tp, slice(bj.A[1][1], 0).truncate(top), slice(bj.A[1][2], 0).truncate(top),
                 slice(bj.A[2][2], 0).truncate(top));
    for (std::size_t r = 0; r < 3; ++r) {
        sys.columns[0][r] = aff.col1[r];
        sys.columns[1][r] = aff.col2[r];
        sys.rhs_jets[r] = -aff.offset[r];
    }
    sys.columns[2][0] = Jet(2, top);
    sys.columns[2][1] = a11_0;
    sys.columns[2][2] = -perp_0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            sys.theta(r, c) = sys.columns[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)]
                                  .value();
        }
        sys.rhs[r] = sys.rhs_jets[static_cast<std::size_t>(r)].value();
    }
    sys.tangent = Vec::Zero(3);
    sys.tangent[1] = perp[0].value();
    sys.tangent[2] = perp[1].value();
    return sys;
}

RecoveryState recover_order_m(RecoveryState state, const BoundaryJets& bj, int m,
                              const RecoverConfig& cfg, const OracleJets* oracle) {
    const ThetaSystem sys = build_theta_system(state, bj, m);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(sys.theta);
    const auto sv = svd.singularValues();
    const double cond = sv[2] > 0.0 ? sv[0] / sv[2] : std::numeric_limits<double>::infinity();
    if (!(cond <= cfg.condition_bound)) {
        std::ostringstream msg;
        msg << "theta system at order " << m << " has condition number " << cond;
        throw IllConditioned(msg.str(), m, cond);
    }

    const double fm = factorial(m);
    const double fm1 = factorial(m + 1);
    const Vec grad = [&] {
        Vec g(3);
        g << state.order0.d1u, jets::partial(bj.dirichlet, 0).value(),
            jets::partial(bj.dirichlet, 1).value();
        return g;
    }();

    double gauge = 0.0;
    if (cfg.mode == RecoverConfig::Mode::A) {
        const Jet det = det3(sys.columns);
        std::array<Jet, 3> xi;
        for (std::size_t c = 0; c < 3; ++c) {
            auto replaced = sys.columns;
            replaced[c] = sys.rhs_jets;
            xi[c] = det3(replaced) / det;
        }
        jets::set_slice(state.gamma, m, xi[0] / fm);
        jets::set_slice(state.u, m + 1, xi[1] / fm1);
        gauge = max_abs(xi[2]);
    } else {
        if (oracle == nullptr) {
            throw InvalidArgument("mode B needs the oracle jets");
        }
        const Eigen::Vector3d xi = sys.theta.partialPivLu().solve(sys.rhs);
        Jet gs = slice(oracle->gamma, m);
        Jet us = slice(oracle->u, m + 1);
        gs.coefficients()[0] = xi[0] / fm;
        us.coefficients()[0] = xi[1] / fm1;
        jets::set_slice(state.gamma, m, gs);
        jets::set_slice(state.u, m + 1, us);
        gauge = std::abs(xi[2]);
    }
    state.conditions.push_back(cond);
    state.gauge_residuals.push_back(gauge);
    state.det_direct.push_back(theta_det_direct(sys.theta));
    state.det_paper.push_back(theta_det_paper(state.order0.gamma, grad, bj.p));
    state.completed = m;
    return state;
}

RecoveryState recover_all(const BoundaryJets& bj, const RecoverConfig& cfg,
                          const OracleJets* oracle) {
    RecoveryState st = start_recovery(bj, cfg);
    for (int m = 1; m <= bj.order; ++m) {
        st = recover_order_m(std::move(st), bj, m, cfg, oracle);
    }
    return st;
}

std::vector<double> taylor_reconstruct(const RecoveryState& state,
                                       const std::vector<double>& depths) {
    std::vector<double> out;
    for (double s : depths) {
        double acc = 0.0;
        double pw = 1.0;
        for (int k = 0; k <= state.completed; ++k) {
            jets::MultiIndex a{k, 0, 0};
            acc += state.gamma.coefficient(a) * pw;
            pw *= -s;
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace plap::recover
