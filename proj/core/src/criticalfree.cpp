#include "plap/criticalfree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fe_assembly.hpp"
#include "plap/linearize.hpp"

namespace plap::criticalfree {

namespace {

void require_unit(const Vec& zeta, int n) {
    if (zeta.size() != n) {
        throw InvalidArgument("zeta dimension does not match the domain");
    }
    if (std::abs(zeta.norm() - 1.0) > 1e-12) {
        throw InvalidArgument("zeta must be a unit vector");
    }
}

}  // namespace

grid::TensorField assemble_B(const grid::WeightField& gamma, double p, const Vec& zeta,
                             const grid::VectorField& xi_field, double rel_tol) {
    psolve::require_exponent(p);
    grid::require_same_domain(gamma.domain(), xi_field.domain(), "assemble_B");
    const int n = xi_field.domain()->dimension();
    require_unit(zeta, n);
    const bool on_cells = xi_field.location() == grid::Location::Cell;
    const grid::ScalarField g = on_cells ? grid::to_cells(gamma.field()) : gamma.field();

    const Mat at_zero = linearize::dJ(zeta, p);
    grid::TensorField b(xi_field.domain(), xi_field.location(), Mat::Zero(n, n));
    for (std::size_t i = 0; i < xi_field.size(); ++i) {
        const Vec& xi = xi_field[i];
        if (xi.squaredNorm() == 0.0) {
            b.set(i, g[i] * at_zero);
        } else {
            b.set(i, g[i] * linearize::segment_average_dJ(zeta, zeta + xi, p, rel_tol));
        }
    }
    return b;
}

namespace {

double max_norm(const grid::VectorField& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        m = std::max(m, v[i].norm());
    }
    return m;
}

}  // namespace

FixedPointReport fixed_point_u0(const grid::WeightField& gamma, double p, const Vec& zeta,
                                const FixedPointConfig& cfg) {
    psolve::require_exponent(p);
    const grid::DomainPtr& dom = gamma.domain();
    const grid::Domain& d = *dom;
    const int n = d.dimension();
    require_unit(zeta, n);
    if (!(cfg.tol > 0.0) || cfg.max_iter < 1) {
        throw InvalidArgument("fixed point tolerance and budget must be positive");
    }

    const auto gc = grid::to_cells(gamma.field());
    const Vec jz = linearize::J(zeta, p);
    const double vol = d.simplex_volume();
    std::vector<double> load(d.node_count(), 0.0);
    const auto& simplices = d.simplices();
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        for (int k = 0; k <= n; ++k) {
            load[simplices[s].vertices[k]] -=
                vol * gc[s] * jz.dot(detail::basis_gradient(d, simplices[s], k));
        }
    }

    FixedPointReport rep;
    grid::ScalarField v(dom);
    const grid::BoundaryData zero(dom);
    bool done = false;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        const auto b = assemble_B(gamma, p, zeta, grid::cell_gradient(v), cfg.quad_rel_tol);
        grid::ScalarField next = detail::solve_dirichlet(
            zero, [&](std::size_t s) -> Mat { return b[s]; }, cfg.cg_rel_tol, cfg.cg_max_iter,
            &load);

        double diff = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            diff = std::max(diff, std::abs(next[i] - v[i]));
        }
        const double gn = max_norm(grid::cell_gradient(next));
        rep.grad_history.push_back(gn);
        rep.update_history.push_back(diff);
        rep.iterations = k;
        v = std::move(next);
        if (gn >= 0.5) {
            std::ostringstream msg;
            msg << "iterate " << k << " has max |grad V| = " << gn
                << " >= 1/2; the weight is too far from constant along zeta";
            throw BallEscape(msg.str(), k, gn);
        }
        if (diff < cfg.tol) {
            done = true;
            break;
        }
    }
    if (!done) {
        std::ostringstream msg;
        msg << "Picard iteration did not settle within " << cfg.max_iter << " iterations";
        throw NonConvergence(msg.str(), rep.update_history);
    }

    rep.R = v;
    rep.u0 = grid::ScalarField(dom);
    for (std::size_t i = 0; i < v.size(); ++i) {
        rep.u0[i] = zeta.dot(d.coordinate(i)) + v[i];
    }
    rep.min_grad_u0 = min_gradient(rep.u0, true).value;
    const auto r = psolve::residual(gamma, p, rep.u0, 0.0);
    rep.residual = 0.0;
    for (double x : r.values()) {
        rep.residual = std::max(rep.residual, std::abs(x));
    }
    rep.converged = rep.grad_history.back() <= 0.5 && rep.min_grad_u0 > 0.5 &&
                    rep.residual <= cfg.residual_tol;
    return rep;
}

GradientMinimum min_gradient(const grid::ScalarField& u, bool interior_only) {
    const auto g = grid::gradient(u);
    GradientMinimum out{std::numeric_limits<double>::infinity(), 0};
    const auto visit = [&](grid::NodeId id) {
        const double v = g[id].norm();
        if (v < out.value) {
            out = {v, id};
        }
    };
    if (interior_only) {
        for (grid::NodeId id : u.domain()->interior_nodes()) {
            visit(id);
        }
    } else {
        for (grid::NodeId id = 0; id < g.size(); ++id) {
            visit(id);
        }
    }
    return out;
}

std::vector<grid::NodeId> boundary_cycle(const grid::Domain& d) {
    if (d.dimension() != 2) {
        throw InvalidArgument("boundary cycle needs a 2D domain");
    }
    const int nx = d.nodes_along(0);
    const int ny = d.nodes_along(1);
    std::vector<grid::NodeId> out;
    for (int i = 0; i < nx; ++i) {
        out.push_back(d.node_index({i, 0, 0}));
    }
    for (int j = 1; j < ny; ++j) {
        out.push_back(d.node_index({nx - 1, j, 0}));
    }
    for (int i = nx - 2; i >= 0; --i) {
        out.push_back(d.node_index({i, ny - 1, 0}));
    }
    for (int j = ny - 2; j >= 1; --j) {
        out.push_back(d.node_index({0, j, 0}));
    }
    return out;
}

BoundaryExtrema scan_boundary_extrema(const grid::BoundaryData& phi, double rel_tol) {
    const grid::Domain& d = *phi.domain();
    const auto cycle = boundary_cycle(d);
    std::vector<double> vals;
    vals.reserve(cycle.size());
    for (grid::NodeId id : cycle) {
        vals.push_back(phi.at_node(id));
    }
    const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
    const double tol = rel_tol * std::max(1.0, *hi - *lo);

    BoundaryExtrema out;
    out.argmax = cycle[static_cast<std::size_t>(hi - vals.begin())];
    out.argmin = cycle[static_cast<std::size_t>(lo - vals.begin())];
    if (*hi - *lo <= tol) {
        out.flat = true;
        return out;
    }

    // Merge the cycle into plateaus of equal values, then classify each one by
    // its neighbours.
    struct Run {
        double value;
        std::size_t length;
    };
    const std::size_t m = vals.size();
    std::size_t start = 0;
    while (std::abs(vals[start] - vals[(start + m - 1) % m]) <= tol) {
        ++start;
    }
    std::vector<Run> runs;
    for (std::size_t k = 0; k < m; ++k) {
        const double v = vals[(start + k) % m];
        if (!runs.empty() && std::abs(v - runs.back().value) <= tol) {
            ++runs.back().length;
        } else {
            runs.push_back({v, 1});
        }
    }
    const std::size_t r = runs.size();
    for (std::size_t k = 0; k < r; ++k) {
        const double prev = runs[(k + r - 1) % r].value;
        const double next = runs[(k + 1) % r].value;
        const double v = runs[k].value;
        const bool is_max = v > prev && v > next;
        const bool is_min = v < prev && v < next;
        if (is_max) {
            ++out.maxima;
        }
        if (is_min) {
            ++out.minima;
        }
        if ((is_max || is_min) && runs[k].length > 1) {
            out.flat = true;
        }
    }
    return out;
}

Vec default_extremal_direction() {
    Vec z(2);
    z << std::cos(0.3), std::sin(0.3);
    return z;
}

ExtremalData extremal_boundary_data_2d(const grid::DomainPtr& domain, const Vec& zeta) {
    if (domain->dimension() != 2) {
        throw InvalidArgument("extremal boundary data is constructed for n = 2 only");
    }
    require_unit(zeta, 2);
    ExtremalData out{grid::sample_boundary(domain, [&](const Vec& x) { return zeta.dot(x); }),
                     zeta,
                     {}};
    out.scan = scan_boundary_extrema(out.phi);
    if (!out.scan.single_strict()) {
        std::ostringstream msg;
        msg << "zeta.x has " << out.scan.maxima << " local maxima and " << out.scan.minima
            << " local minima on the boundary" << (out.scan.flat ? " with a flat extremum" : "");
        throw DegenerateInput(msg.str());
    }
    return out;
}

}  // namespace plap::criticalfree
