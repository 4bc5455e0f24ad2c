#include "plap/psolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fe_assembly.hpp"

namespace plap::psolve {

void PSolveConfig::validate() const {
    if (!(eps_reg >= 0.0)) {
        throw InvalidArgument("eps_reg must be non-negative");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("tol must be positive");
    }
    if (max_newton < 1 || max_backtracks < 1 || cg_max_iter < 1) {
        throw InvalidArgument("iteration budgets must be positive");
    }
    if (!(armijo_c > 0.0 && armijo_c < 1.0) || !(backtrack > 0.0 && backtrack < 1.0)) {
        throw InvalidArgument("line-search parameters must lie in (0,1)");
    }
}

void require_exponent(double p) {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw InvalidArgument("exponent p must be finite and greater than 1");
    }
}

namespace {

struct CellState {
    grid::VectorField grad;
    std::vector<double> smoothed;  // |g|^2 + eps^2
};

CellState cell_state(const grid::ScalarField& u, double eps_reg) {
    CellState st{grid::cell_gradient(u), {}};
    st.smoothed.resize(st.grad.size());
    for (std::size_t s = 0; s < st.grad.size(); ++s) {
        st.smoothed[s] = st.grad[s].squaredNorm() + eps_reg * eps_reg;
    }
    return st;
}

double energy_of(const grid::ScalarField& gamma_cells, double p, const CellState& st,
                 double vol) {
    double e = 0.0;
    for (std::size_t s = 0; s < st.smoothed.size(); ++s) {
        e += gamma_cells[s] * std::pow(st.smoothed[s], 0.5 * p);
    }
    return e * vol / p;
}

// dE/du at every node.
std::vector<double> energy_gradient(const grid::Domain& d, const grid::ScalarField& gamma_cells,
                                    double p, const CellState& st) {
    const int n = d.dimension();
    const double vol = d.simplex_volume();
    std::vector<double> g(d.node_count(), 0.0);
    const auto& simplices = d.simplices();
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const double k = gamma_cells[s] * std::pow(st.smoothed[s], 0.5 * (p - 2.0));
        const Vec flux = k * st.grad[s];
        for (int v = 0; v <= n; ++v) {
            g[simplices[s].vertices[v]] +=
                vol * flux.dot(detail::basis_gradient(d, simplices[s], v));
        }
    }
    return g;
}

double interior_max(const grid::Domain& d, const std::vector<double>& g) {
    double r = 0.0;
    for (grid::NodeId id : d.interior_nodes()) {
        r = std::max(r, std::abs(g[id]));
    }
    return r / d.node_volume();
}

void check_inputs(const grid::WeightField& gamma, double p, const grid::DomainPtr& domain) {
    require_exponent(p);
    if (gamma.location() != grid::Location::Node) {
        throw InvalidArgument("gamma must be a node-located field");
    }
    grid::require_same_domain(gamma.domain(), domain, "psolve");
}

double min_interior_gradient(const grid::ScalarField& u) {
    const auto g = grid::gradient(u);
    double m = std::numeric_limits<double>::infinity();
    for (grid::NodeId id : u.domain()->interior_nodes()) {
        m = std::min(m, g[id].norm());
    }
    return m;
}

}  // namespace

double p_energy(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                double eps_reg) {
    check_inputs(gamma, p, u.domain());
    const auto gc = grid::to_cells(gamma.field());
    return energy_of(gc, p, cell_state(u, eps_reg), u.domain()->simplex_volume());
}

grid::ScalarField residual(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                           double eps_reg) {
    check_inputs(gamma, p, u.domain());
    const grid::Domain& d = *u.domain();
    const auto gc = grid::to_cells(gamma.field());
    const auto g = energy_gradient(d, gc, p, cell_state(u, eps_reg));
    grid::ScalarField r(u.domain());
    for (grid::NodeId id : d.interior_nodes()) {
        r[id] = -g[id] / d.node_volume();
    }
    return r;
}

ForwardSolution solve_p_laplace(const grid::WeightField& gamma, double p,
                                const grid::BoundaryData& f, const PSolveConfig& cfg) {
    check_inputs(gamma, p, f.domain());
    cfg.validate();
    for (double v : f.values()) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("boundary data must be finite");
        }
    }
    const grid::Domain& d = *f.domain();
    const auto dofs = detail::interior_dofs(d);
    const auto gc = grid::to_cells(gamma.field());
    const double vol = d.simplex_volume();
    const int n = d.dimension();

    // Weighted Laplace solution as the starting point.
    ForwardSolution sol;
    sol.u = detail::solve_dirichlet(
        f, [&](std::size_t s) -> Mat { return gc[s] * Mat::Identity(n, n); }, cfg.cg_rel_tol,
        cfg.cg_max_iter);

    auto st = cell_state(sol.u, cfg.eps_reg);
    double e = energy_of(gc, p, st, vol);
    auto grad = energy_gradient(d, gc, p, st);
    double res = interior_max(d, grad);
    sol.residual_history.push_back(res);

    const auto ndof = static_cast<Eigen::Index>(dofs.node_of_dof.size());
    int it = 0;
    while (res > cfg.tol) {
        if (it >= cfg.max_newton) {
            std::ostringstream msg;
            msg << "Newton budget of " << cfg.max_newton << " iterations exhausted at residual "
                << res << " (tol " << cfg.tol << ")";
            throw NonConvergence(msg.str(), sol.residual_history);
        }
        ++it;

        const auto hess = detail::assemble_matrix(d, dofs, [&](std::size_t s) -> Mat {
            const double sm = st.smoothed[s];
            const Vec& g = st.grad[s];
            Mat m = std::pow(sm, 0.5 * (p - 2.0)) * Mat::Identity(n, n);
            m += (p - 2.0) * std::pow(sm, 0.5 * (p - 4.0)) * (g * g.transpose());
            return gc[s] * m;
        });
        Eigen::VectorXd rhs(ndof);
        for (Eigen::Index k = 0; k < ndof; ++k) {
            rhs[k] = -grad[dofs.node_of_dof[static_cast<std::size_t>(k)]];
        }

        Eigen::VectorXd dir;
        try {
            dir = detail::cg_solve(hess, rhs, Eigen::VectorXd::Zero(ndof), cfg.cg_rel_tol,
                                   cfg.cg_max_iter);
        } catch (const NonConvergence&) {
            dir = rhs.cwiseQuotient(hess.diagonal());
        }
        double slope = -dir.dot(rhs);
        if (!(slope < 0.0)) {
            // Not a descent direction: fall back to scaled steepest descent.
            dir = rhs.cwiseQuotient(hess.diagonal());
            slope = -dir.dot(rhs);
        }

        auto trial_state = [&](double t) {
            grid::ScalarField trial = sol.u;
            for (Eigen::Index k = 0; k < ndof; ++k) {
                trial[dofs.node_of_dof[static_cast<std::size_t>(k)]] += t * dir[k];
            }
            return trial;
        };

        double t = 1.0;
        bool accepted = false;
        for (int b = 0; b < cfg.max_backtracks; ++b) {
            auto trial = trial_state(t);
            auto tst = cell_state(trial, cfg.eps_reg);
            const double et = energy_of(gc, p, tst, vol);
            const bool armijo = et <= e + cfg.armijo_c * t * slope;
            bool roundoff_ok = false;
            std::vector<double> tgrad;
            if (!armijo && et - e <= 1e-12 * std::abs(e)) {
                // Energy change is below what doubles resolve; judge by the gradient.
                tgrad = energy_gradient(d, gc, p, tst);
                roundoff_ok = interior_max(d, tgrad) < res;
            }
            if (armijo || roundoff_ok) {
                sol.u = std::move(trial);
                st = std::move(tst);
                e = et;
                grad = tgrad.empty() ? energy_gradient(d, gc, p, st) : std::move(tgrad);
                accepted = true;
                break;
            }
            t *= cfg.backtrack;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "line search failed at Newton iteration " << it << ", residual " << res;
            throw NonConvergence(msg.str(), sol.residual_history);
        }
        res = interior_max(d, grad);
        sol.residual_history.push_back(res);
    }

    sol.iterations = it;
    sol.residual = res;
    sol.energy = e;
    sol.min_gradient = d.interior_nodes().empty() ? 0.0 : min_interior_gradient(sol.u);
    if (sol.min_gradient < cfg.eps_reg) {
        std::ostringstream msg;
        msg << "DegenerateGradient: min interior |grad u| = " << sol.min_gradient
            << " is below eps_reg; linearization at this solution is unsafe";
        sol.warnings.push_back(msg.str());
    }
    return sol;
}

grid::FaceField boundary_flux(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                              double eps_reg) {
    check_inputs(gamma, p, u.domain());
    const auto g = grid::gradient(u);
    grid::FaceField out(u.domain());
    const auto& faces = u.domain()->faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        auto dst = out.face(fi);
        for (std::size_t i = 0; i < faces[fi].nodes.size(); ++i) {
            const grid::NodeId id = faces[fi].nodes[i];
            const Vec& gi = g[id];
            const double k =
                gamma[id] * std::pow(gi.squaredNorm() + eps_reg * eps_reg, 0.5 * (p - 2.0));
            dst[i] = k * faces[fi].normal.dot(gi);
        }
    }
    return out;
}

grid::FaceField dn_apply(const grid::WeightField& gamma, double p, const grid::BoundaryData& f,
                         const PSolveConfig& cfg) {
    const auto sol = solve_p_laplace(gamma, p, f, cfg);
    return boundary_flux(gamma, p, sol.u, cfg.eps_reg);
}

}  // namespace plap::psolve
