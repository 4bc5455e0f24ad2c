#pragma once

#include <vector>

#include "plap/grid.hpp"
#include "plap/psolve.hpp"

namespace plap::linearize {

// J(xi) = |xi|^{p-2} xi. Throws DegenerateInput at xi = 0 when p < 2.
Vec J(const Vec& xi, double p);

// Jacobian of J: |xi|^{p-2} (I + (p-2) xi xi^T / |xi|^2). Throws DegenerateInput
// at xi = 0.
Mat dJ(const Vec& xi, double p);

// int_0^1 dJ(from + t (to - from)) dt by adaptive Gauss-Kronrod, entry by
// entry. Throws SegmentDegenerate if the segment passes within
// `1e-8 * max(|from|, |to|)` of the origin.
Mat segment_average_dJ(const Vec& from, const Vec& to, double p, double rel_tol = 1e-14);

// |J(zeta) - J(xi) - (int_0^1 dJ(xi + t(zeta - xi)) dt)(zeta - xi)|.
double taylor_identity_check(const Vec& zeta, const Vec& xi, double p, double rel_tol = 1e-14);

// Node-wise A = gamma dJ(grad u0, p) with the grid gradient. Throws
// DegenerateGradient if |grad u0| < min_gradient anywhere.
grid::TensorField assemble_A(const grid::WeightField& gamma, double p, const grid::ScalarField& u0,
                             double min_gradient = 1e-12);

// Same formula on every simplex with the P1 gradient and the simplex-averaged
// weight. This is the exact Jacobian of the discrete p-Laplace operator.
grid::TensorField assemble_A_cells(const grid::WeightField& gamma, double p,
                                   const grid::ScalarField& u0, double min_gradient = 1e-12);

struct LinearSolveConfig {
    double tol = 1e-8;
    double cg_rel_tol = 1e-13;
    int cg_max_iter = 20000;
};

// Solve div(A grad u) = 0 with trace phi. Node-located A is averaged onto the
// simplices. Throws NonConvergence if the interior residual exceeds cfg.tol.
grid::ScalarField solve_linear(const grid::TensorField& a, const grid::BoundaryData& phi,
                               const LinearSolveConfig& cfg = {});

// nu . A grad u on every face, node-located A and grid gradient.
grid::FaceField linear_flux(const grid::TensorField& a_nodes, const grid::ScalarField& u);

// Linear DN map for a node-located A: solve_linear then linear_flux.
grid::FaceField dn_linear(const grid::TensorField& a_nodes, const grid::BoundaryData& phi,
                          const LinearSolveConfig& cfg = {});

struct LinearizedProblem {
    grid::TensorField a_nodes;
    grid::TensorField a_cells;
    grid::ScalarField u0;
    grid::BoundaryData phi0;
    double p = 0.0;
};

LinearizedProblem linearize_at(const grid::WeightField& gamma, double p,
                               const grid::ScalarField& u0);

// Solve with the per-simplex tensor, extract flux with the node tensor.
grid::ScalarField solve_linear(const LinearizedProblem& lp, const grid::BoundaryData& phi,
                               const LinearSolveConfig& cfg = {});
grid::FaceField dn_linear(const LinearizedProblem& lp, const grid::BoundaryData& phi,
                          const LinearSolveConfig& cfg = {});

// (Lambda_gamma(phi0 + eps phi) - Lambda_gamma(phi0)) / eps.
grid::FaceField dn_finite_difference(const grid::WeightField& gamma, double p,
                                     const grid::BoundaryData& phi0,
                                     const grid::BoundaryData& phi, double eps,
                                     const psolve::PSolveConfig& cfg = {});

std::vector<double> default_eps_schedule();

struct LinearizationEntry {
    double eps = 0.0;
    grid::FaceField quotient;
    double deviation = 0.0;
};

struct LinearizationReport {
    std::vector<LinearizationEntry> entries;
    grid::FaceField linear_flux;
    // Deviations at or below this value count as the floor.
    double floor = 0.0;
    // Index of the first entry at the floor, or entries.size().
    std::size_t floor_index = 0;
    bool monotone = false;
    bool pass = false;
};

// Quotients for a strictly decreasing eps schedule, compared with
// Lambda_A phi in the max norm. pass iff the deviation strictly decreases
// until it reaches `floor` and every deviation is finite.
LinearizationReport verify_linearization(const grid::WeightField& gamma, double p,
                                         const grid::BoundaryData& phi0,
                                         const grid::BoundaryData& phi,
                                         const std::vector<double>& eps_schedule,
                                         const psolve::PSolveConfig& cfg = {},
                                         double floor = 0.0);

// Weights constant along an axis direction zeta reduce the linearized
// problem at u0 = zeta.x to an isotropic one on a box stretched by
// 1/sqrt(p-1) along zeta, with conductivity sqrt(p-1) gamma.
struct IsotropicReduction {
    grid::DomainPtr stretched;
    grid::WeightField sigma;
    int axis = 0;
    double stretch = 1.0;

    // Boundary data on the original domain, carried node for node.
    grid::BoundaryData carry(const grid::BoundaryData& on_original) const;
    // Flux on the stretched domain expressed as nu . A grad u on the original.
    grid::FaceField flux_to_original(const grid::FaceField& on_stretched,
                                     const grid::DomainPtr& original) const;
};

IsotropicReduction rescale_translation_invariant(const grid::WeightField& gamma, const Vec& zeta,
                                                 double p, double tol = 1e-10);

}  // namespace plap::linearize
