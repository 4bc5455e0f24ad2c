#pragma once

// P1 assembly on the Kuhn split with Dirichlet elimination. Internal to
// plap_core.

#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "plap/grid.hpp"

namespace plap::detail {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

// Interior nodes are the unknowns; boundary values are fixed.
struct DofMap {
    std::vector<long> dof_of_node;
    std::vector<grid::NodeId> node_of_dof;
};

DofMap interior_dofs(const grid::Domain& d);

// Gradient of the P1 hat function of local vertex k (0..n) on simplex `s`.
Vec basis_gradient(const grid::Domain& d, const grid::Simplex& s, int k);

// Per-simplex coefficient matrix for sum_T vol * grad(w)^T M_T grad(v).
using CellCoefficient = std::function<Mat(std::size_t simplex)>;

struct DirichletSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
};

// Assemble the interior block of the bilinear form and move the boundary
// values of `trace_carrier` to the right-hand side. `load`, when given, holds a
// per-node right-hand side (already integrated) that is added on interior rows.
DirichletSystem assemble_dirichlet(const grid::Domain& d, const DofMap& dofs,
                                   const CellCoefficient& coeff,
                                   const grid::ScalarField& trace_carrier,
                                   const std::vector<double>* load = nullptr);

// Only the interior block.
SparseMatrix assemble_matrix(const grid::Domain& d, const DofMap& dofs,
                             const CellCoefficient& coeff);

// Jacobi-preconditioned CG. Throws NonConvergence if the relative residual
// does not reach `rel_tol` within `max_iter` iterations.
Eigen::VectorXd cg_solve(const SparseMatrix& a, const Eigen::VectorXd& b,
                         const Eigen::VectorXd& x0, double rel_tol, int max_iter);

// Solve the Dirichlet problem for the bilinear form with the given trace.
grid::ScalarField solve_dirichlet(const grid::BoundaryData& trace, const CellCoefficient& coeff,
                                  double rel_tol, int max_iter,
                                  const std::vector<double>* load = nullptr);

// Apply the full bilinear form to `u` (all nodes, boundary rows included).
std::vector<double> apply_form(const grid::Domain& d, const CellCoefficient& coeff,
                               const grid::ScalarField& u);

}  // namespace plap::detail
