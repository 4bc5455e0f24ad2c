#pragma once

#include <string>
#include <vector>

#include "plap/grid.hpp"

namespace plap::psolve {

// Solver parameters. The exponent p is passed separately to every operation.
struct PSolveConfig {
    // Gradient-norm smoothing: |grad u|^2 is replaced by |grad u|^2 + eps_reg^2.
    double eps_reg = 1e-8;
    // Bound on max |residual| over interior nodes.
    double tol = 1e-8;
    int max_newton = 60;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
    // Inner CG.
    double cg_rel_tol = 1e-12;
    int cg_max_iter = 20000;

    void validate() const;
};

struct ForwardSolution {
    grid::ScalarField u;
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
    // min |grad u| over interior nodes (grid gradient).
    double min_gradient = 0.0;
    double energy = 0.0;
    std::vector<std::string> warnings;
};

void require_exponent(double p);

// (1/p) sum_T gamma_T (|grad u|^2 + eps^2)^{p/2} vol_T over the simplices.
double p_energy(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                double eps_reg);

// Discrete divergence of gamma (|grad u|^2 + eps^2)^{(p-2)/2} grad u at interior
// nodes: minus the energy gradient divided by the nodal volume. Zero on the
// boundary.
grid::ScalarField residual(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                           double eps_reg);

// Minimize the regularized p-energy with trace f by damped Newton.
ForwardSolution solve_p_laplace(const grid::WeightField& gamma, double p,
                                const grid::BoundaryData& f, const PSolveConfig& cfg = {});

// gamma (|grad u|^2 + eps^2)^{(p-2)/2} d_nu u on every face, grid gradient.
grid::FaceField boundary_flux(const grid::WeightField& gamma, double p, const grid::ScalarField& u,
                              double eps_reg);

// Nonlinear Dirichlet-to-Neumann map: solve, then boundary_flux.
grid::FaceField dn_apply(const grid::WeightField& gamma, double p, const grid::BoundaryData& f,
                         const PSolveConfig& cfg = {});

}  // namespace plap::psolve
