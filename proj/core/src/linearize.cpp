#include "plap/linearize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fe_assembly.hpp"

namespace plap::linearize {

Vec J(const Vec& xi, double p) {
    const double r = xi.norm();
    if (r == 0.0) {
        if (p < 2.0) {
            throw DegenerateInput("J(xi) is undefined at xi = 0 for p < 2");
        }
        return Vec::Zero(xi.size());
    }
    return std::pow(r, p - 2.0) * xi;
}

Mat dJ(const Vec& xi, double p) {
    const double r2 = xi.squaredNorm();
    if (r2 == 0.0) {
        throw DegenerateInput("dJ(xi) is undefined at xi = 0");
    }
    const auto n = xi.size();
    Mat m = Mat::Identity(n, n) + ((p - 2.0) / r2) * (xi * xi.transpose());
    return std::pow(r2, 0.5 * (p - 2.0)) * m;
}

Mat segment_average_dJ(const Vec& from, const Vec& to, double p, double rel_tol) {
    const Vec d = to - from;
    const double dd = d.squaredNorm();
    double t_star = dd > 0.0 ? std::clamp(-from.dot(d) / dd, 0.0, 1.0) : 0.0;
    const double closest = (from + t_star * d).norm();
    const double scale = std::max(from.norm(), to.norm());
    if (!(closest > 1e-8 * scale)) {
        std::ostringstream msg;
        msg << "segment passes within " << closest << " of the origin";
        throw SegmentDegenerate(msg.str());
    }
    const auto n = from.size();
    Mat out(n, n);
    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = j; k < n; ++k) {
            auto entry = [&](double t) { return dJ(from + t * d, p)(j, k); };
            const double v = Rule::integrate(entry, 0.0, 1.0, 15, rel_tol);
            out(j, k) = v;
            out(k, j) = v;
        }
    }
    return out;
}

double taylor_identity_check(const Vec& zeta, const Vec& xi, double p, double rel_tol) {
    if (zeta.size() != xi.size()) {
        throw InvalidArgument("taylor_identity_check: dimension mismatch");
    }
    if ((zeta - xi).squaredNorm() == 0.0) {
        return 0.0;
    }
    const Mat avg = segment_average_dJ(xi, zeta, p, rel_tol);
    return (J(zeta, p) - J(xi, p) - avg * (zeta - xi)).norm();
}

namespace {

void check_gradient(double norm, double min_gradient, std::size_t where, const char* loc) {
    if (!(norm >= min_gradient) || norm == 0.0) {
        std::ostringstream msg;
        msg << "|grad u0| = " << norm << " at " << loc << " " << where << " is below "
            << min_gradient;
        throw DegenerateGradient(msg.str());
    }
}

}  // namespace

grid::TensorField assemble_A(const grid::WeightField& gamma, double p, const grid::ScalarField& u0,
                             double min_gradient) {
    psolve::require_exponent(p);
    grid::require_same_domain(gamma.domain(), u0.domain(), "assemble_A");
    const auto g = grid::gradient(u0);
    const int n = u0.domain()->dimension();
    grid::TensorField a(u0.domain(), grid::Location::Node, Mat::Zero(n, n));
    for (std::size_t i = 0; i < g.size(); ++i) {
        check_gradient(g[i].norm(), min_gradient, i, "node");
        a.set(i, gamma[i] * dJ(g[i], p));
    }
    return a;
}

grid::TensorField assemble_A_cells(const grid::WeightField& gamma, double p,
                                   const grid::ScalarField& u0, double min_gradient) {
    psolve::require_exponent(p);
    grid::require_same_domain(gamma.domain(), u0.domain(), "assemble_A_cells");
    const auto g = grid::cell_gradient(u0);
    const auto gc = grid::to_cells(gamma.field());
    const int n = u0.domain()->dimension();
    grid::TensorField a(u0.domain(), grid::Location::Cell, Mat::Zero(n, n));
    for (std::size_t s = 0; s < g.size(); ++s) {
        check_gradient(g[s].norm(), min_gradient, s, "simplex");
        a.set(s, gc[s] * dJ(g[s], p));
    }
    return a;
}

grid::ScalarField solve_linear(const grid::TensorField& a, const grid::BoundaryData& phi,
                               const LinearSolveConfig& cfg) {
    grid::require_same_domain(a.domain(), phi.domain(), "solve_linear");
    const auto cells = grid::to_cells(a);
    const detail::CellCoefficient coeff = [&](std::size_t s) -> Mat { return cells[s]; };
    auto u = detail::solve_dirichlet(phi, coeff, cfg.cg_rel_tol, cfg.cg_max_iter);

    const grid::Domain& d = *phi.domain();
    const auto r = detail::apply_form(d, coeff, u);
    double res = 0.0;
    for (grid::NodeId id : d.interior_nodes()) {
        res = std::max(res, std::abs(r[id]));
    }
    res /= d.node_volume();
    if (res > cfg.tol) {
        std::ostringstream msg;
        msg << "linear solve residual " << res << " exceeds tol " << cfg.tol;
        throw NonConvergence(msg.str(), {res});
    }
    return u;
}

grid::FaceField linear_flux(const grid::TensorField& a_nodes, const grid::ScalarField& u) {
    if (a_nodes.location() != grid::Location::Node) {
        throw InvalidArgument("linear_flux: expects a node-located tensor");
    }
    grid::require_same_domain(a_nodes.domain(), u.domain(), "linear_flux");
    const auto g = grid::gradient(u);
    grid::FaceField out(u.domain());
    const auto& faces = u.domain()->faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        auto dst = out.face(fi);
        for (std::size_t i = 0; i < faces[fi].nodes.size(); ++i) {
            const grid::NodeId id = faces[fi].nodes[i];
            dst[i] = faces[fi].normal.dot(a_nodes[id] * g[id]);
        }
    }
    return out;
}

grid::FaceField dn_linear(const grid::TensorField& a_nodes, const grid::BoundaryData& phi,
                          const LinearSolveConfig& cfg) {
    return linear_flux(a_nodes, solve_linear(a_nodes, phi, cfg));
}

LinearizedProblem linearize_at(const grid::WeightField& gamma, double p,
                               const grid::ScalarField& u0) {
    return LinearizedProblem{assemble_A(gamma, p, u0), assemble_A_cells(gamma, p, u0), u0,
                             grid::boundary_trace(u0), p};
}

grid::ScalarField solve_linear(const LinearizedProblem& lp, const grid::BoundaryData& phi,
                               const LinearSolveConfig& cfg) {
    return solve_linear(lp.a_cells, phi, cfg);
}

grid::FaceField dn_linear(const LinearizedProblem& lp, const grid::BoundaryData& phi,
                          const LinearSolveConfig& cfg) {
    return linear_flux(lp.a_nodes, solve_linear(lp.a_cells, phi, cfg));
}

namespace {

grid::BoundaryData shifted(const grid::BoundaryData& phi0, const grid::BoundaryData& phi,
                           double eps) {
    grid::require_same_domain(phi0.domain(), phi.domain(), "boundary data");
    grid::BoundaryData out(phi0.domain());
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = phi0[s] + eps * phi[s];
    }
    return out;
}

}  // namespace

grid::FaceField dn_finite_difference(const grid::WeightField& gamma, double p,
                                     const grid::BoundaryData& phi0,
                                     const grid::BoundaryData& phi, double eps,
                                     const psolve::PSolveConfig& cfg) {
    if (!(eps != 0.0) || !std::isfinite(eps)) {
        throw InvalidArgument("eps must be finite and nonzero");
    }
    const auto base = psolve::dn_apply(gamma, p, phi0, cfg);
    const auto moved = psolve::dn_apply(gamma, p, shifted(phi0, phi, eps), cfg);
    return (1.0 / eps) * (moved - base);
}

std::vector<double> default_eps_schedule() {
    return {1e-1, std::pow(10.0, -1.5), 1e-2, std::pow(10.0, -2.5), 1e-3};
}

LinearizationReport verify_linearization(const grid::WeightField& gamma, double p,
                                         const grid::BoundaryData& phi0,
                                         const grid::BoundaryData& phi,
                                         const std::vector<double>& eps_schedule,
                                         const psolve::PSolveConfig& cfg, double floor) {
    if (eps_schedule.empty()) {
        throw InvalidArgument("eps schedule is empty");
    }
    for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (!(eps_schedule[k] > 0.0) || (k > 0 && !(eps_schedule[k] < eps_schedule[k - 1]))) {
            throw InvalidArgument("eps schedule must be positive and strictly decreasing");
        }
    }
    const auto base = psolve::solve_p_laplace(gamma, p, phi0, cfg);
    const auto base_flux = psolve::boundary_flux(gamma, p, base.u, cfg.eps_reg);
    const auto lp = linearize_at(gamma, p, base.u);

    LinearizationReport report;
    report.floor = floor;
    report.linear_flux = dn_linear(lp, phi);
    for (double eps : eps_schedule) {
        const auto moved = psolve::solve_p_laplace(gamma, p, shifted(phi0, phi, eps), cfg);
        auto quotient =
            (1.0 / eps) * (psolve::boundary_flux(gamma, p, moved.u, cfg.eps_reg) - base_flux);
        const double dev = (quotient - report.linear_flux).max_abs();
        report.entries.push_back({eps, std::move(quotient), dev});
    }

    report.floor_index = report.entries.size();
    bool finite = true;
    bool monotone = true;
    for (std::size_t k = 0; k < report.entries.size(); ++k) {
        const double dev = report.entries[k].deviation;
        finite = finite && std::isfinite(dev);
        if (report.floor_index == report.entries.size() && dev <= floor) {
            report.floor_index = k;
        }
        if (k > 0 && k <= report.floor_index && !(dev < report.entries[k - 1].deviation)) {
            monotone = false;
        }
    }
    report.monotone = monotone;
    report.pass = finite && monotone;
    return report;
}

grid::BoundaryData IsotropicReduction::carry(const grid::BoundaryData& on_original) const {
    std::vector<double> v(on_original.values().begin(), on_original.values().end());
    return grid::BoundaryData(stretched, std::move(v));
}

grid::FaceField IsotropicReduction::flux_to_original(const grid::FaceField& on_stretched,
                                                     const grid::DomainPtr& original) const {
    grid::FaceField out(original);
    const auto& faces = original->faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const double factor = faces[fi].axis == axis ? 1.0 : stretch;
        auto dst = out.face(fi);
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = factor * on_stretched.face(fi)[i];
        }
    }
    return out;
}

IsotropicReduction rescale_translation_invariant(const grid::WeightField& gamma, const Vec& zeta,
                                                 double p, double tol) {
    psolve::require_exponent(p);
    const grid::Domain& d = *gamma.domain();
    if (zeta.size() != d.dimension()) {
        throw InvalidArgument("zeta dimension does not match the domain");
    }
    int axis = -1;
    for (int a = 0; a < d.dimension(); ++a) {
        if (std::abs(std::abs(zeta[a]) - 1.0) <= 1e-12) {
            axis = a;
        } else if (std::abs(zeta[a]) > 1e-12) {
            axis = -2;
            break;
        }
    }
    if (axis < 0) {
        throw InvalidArgument("rescaling requires an axis-aligned unit zeta");
    }
    const auto g = grid::gradient(gamma.field());
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(g[i][axis]));
    }
    if (worst > tol) {
        std::ostringstream msg;
        msg << "zeta . grad gamma reaches " << worst << " (tolerance " << tol << ")";
        throw InvalidArgument(msg.str());
    }

    const double stretch = 1.0 / std::sqrt(p - 1.0);
    std::array<double, 3> ext{}, org{};
    std::array<int, 3> res{};
    for (int a = 0; a < d.dimension(); ++a) {
        const double f = a == axis ? stretch : 1.0;
        ext[a] = f * d.extent(a);
        org[a] = f * d.origin(a);
        res[a] = d.nodes_along(a);
    }
    const auto n = static_cast<std::size_t>(d.dimension());
    auto stretched = grid::build_domain(std::span(ext.data(), n), std::span(res.data(), n),
                                        std::span(org.data(), n));
    grid::ScalarField sigma(stretched);
    const double scale = std::sqrt(p - 1.0);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        sigma[i] = scale * gamma[i];
    }
    return IsotropicReduction{stretched, grid::WeightField(std::move(sigma)), axis, stretch};
}

}  // namespace plap::linearize
