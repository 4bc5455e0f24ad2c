#include "fe_assembly.hpp"

#include <string>

#include <Eigen/IterativeLinearSolvers>

namespace plap::detail {

DofMap interior_dofs(const grid::Domain& d) {
    DofMap map;
    map.dof_of_node.assign(d.node_count(), -1);
    for (grid::NodeId id : d.interior_nodes()) {
        map.dof_of_node[id] = static_cast<long>(map.node_of_dof.size());
        map.node_of_dof.push_back(id);
    }
    return map;
}

Vec basis_gradient(const grid::Domain& d, const grid::Simplex& s, int k) {
    const int n = d.dimension();
    Vec g = Vec::Zero(n);
    if (k >= 1) {
        const int axis = s.perm[k - 1];
        g[axis] += 1.0 / d.spacing(axis);
    }
    if (k < n) {
        const int axis = s.perm[k];
        g[axis] -= 1.0 / d.spacing(axis);
    }
    return g;
}

namespace {

template <class Visit>
void for_each_local(const grid::Domain& d, const CellCoefficient& coeff, Visit&& visit) {
    const int n = d.dimension();
    const double vol = d.simplex_volume();
    const auto& simplices = d.simplices();
    std::array<Vec, 4> grads;
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const auto& sx = simplices[s];
        const Mat m = coeff(s);
        for (int k = 0; k <= n; ++k) {
            grads[k] = basis_gradient(d, sx, k);
        }
        for (int a = 0; a <= n; ++a) {
            const Vec ma = m * grads[a];
            for (int b = 0; b <= n; ++b) {
                visit(sx.vertices[a], sx.vertices[b], vol * grads[b].dot(ma));
            }
        }
    }
}

}  // namespace

DirichletSystem assemble_dirichlet(const grid::Domain& d, const DofMap& dofs,
                                   const CellCoefficient& coeff,
                                   const grid::ScalarField& trace_carrier,
                                   const std::vector<double>* load) {
    const auto ndof = static_cast<Eigen::Index>(dofs.node_of_dof.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(d.simplices().size() * 16);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ndof);
    for_each_local(d, coeff, [&](grid::NodeId row, grid::NodeId col, double value) {
        const long r = dofs.dof_of_node[row];
        if (r < 0) {
            return;
        }
        const long c = dofs.dof_of_node[col];
        if (c >= 0) {
            triplets.emplace_back(r, c, value);
        } else {
            rhs[r] -= value * trace_carrier[col];
        }
    });
    if (load != nullptr) {
        for (Eigen::Index r = 0; r < ndof; ++r) {
            rhs[r] += (*load)[dofs.node_of_dof[static_cast<std::size_t>(r)]];
        }
    }
    SparseMatrix a(ndof, ndof);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return {std::move(a), std::move(rhs)};
}

SparseMatrix assemble_matrix(const grid::Domain& d, const DofMap& dofs,
                             const CellCoefficient& coeff) {
    const auto ndof = static_cast<Eigen::Index>(dofs.node_of_dof.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(d.simplices().size() * 16);
    for_each_local(d, coeff, [&](grid::NodeId row, grid::NodeId col, double value) {
        const long r = dofs.dof_of_node[row];
        const long c = dofs.dof_of_node[col];
        if (r >= 0 && c >= 0) {
            triplets.emplace_back(r, c, value);
        }
    });
    SparseMatrix a(ndof, ndof);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

Eigen::VectorXd cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x0, double rel_tol, int max_iter) {
    if (b.size() == 0) {
        return b;
    }
    if (b.norm() == 0.0) {
        return Eigen::VectorXd::Zero(b.size());
    }
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(rel_tol);
    cg.setMaxIterations(max_iter);
    cg.compute(a);
    Eigen::VectorXd x = cg.solveWithGuess(b, x0);
    if (cg.info() != Eigen::Success) {
        throw NonConvergence("conjugate gradients stopped at relative residual " +
                                 std::to_string(cg.error()) + " after " +
                                 std::to_string(cg.iterations()) + " iterations",
                             {cg.error()});
    }
    return x;
}

grid::ScalarField solve_dirichlet(const grid::BoundaryData& trace, const CellCoefficient& coeff,
                                  double rel_tol, int max_iter,
                                  const std::vector<double>* load) {
    const grid::Domain& d = *trace.domain();
    const DofMap dofs = interior_dofs(d);
    grid::ScalarField u = grid::extend_by_zero(trace);
    const auto sys = assemble_dirichlet(d, dofs, coeff, u, load);
    const Eigen::VectorXd x =
        cg_solve(sys.matrix, sys.rhs, Eigen::VectorXd::Zero(sys.rhs.size()), rel_tol, max_iter);
    for (std::size_t k = 0; k < dofs.node_of_dof.size(); ++k) {
        u[dofs.node_of_dof[k]] = x[static_cast<Eigen::Index>(k)];
    }
    return u;
}

std::vector<double> apply_form(const grid::Domain& d, const CellCoefficient& coeff,
                               const grid::ScalarField& u) {
    std::vector<double> out(d.node_count(), 0.0);
    for_each_local(d, coeff, [&](grid::NodeId row, grid::NodeId col, double value) {
        out[row] += value * u[col];
    });
    return out;
}

}  // namespace plap::detail
