#pragma once

#include <vector>

#include "plap/grid.hpp"
#include "plap/psolve.hpp"

namespace plap::criticalfree {

// B(xi) = gamma int_0^1 dJ(zeta + t xi) dt at every node or simplex of
// `xi_field`. Node-located gamma is averaged onto simplices when xi lives there.
grid::TensorField assemble_B(const grid::WeightField& gamma, double p, const Vec& zeta,
                             const grid::VectorField& xi_field, double rel_tol = 1e-12);

struct FixedPointConfig {
    // Stop when max |V^{k+1} - V^k| falls below this.
    double tol = 1e-10;
    int max_iter = 200;
    double quad_rel_tol = 1e-12;
    double cg_rel_tol = 1e-13;
    int cg_max_iter = 20000;
    // Nonlinear residual bound for the returned u0 (psolve residual).
    double residual_tol = 1e-8;
};

struct FixedPointReport {
    grid::ScalarField R;
    grid::ScalarField u0;
    // max |grad V^k| over simplices, k = 1, 2, ...
    std::vector<double> grad_history;
    // max |V^k - V^{k-1}| over nodes.
    std::vector<double> update_history;
    int iterations = 0;
    bool converged = false;
    double min_grad_u0 = 0.0;
    double residual = 0.0;
};

// Picard iteration V <- T(V) for u0 = zeta.x + R, R = 0 on the boundary, where
// T(V) = U solves div(B(grad V) grad U) = -div(gamma zeta). Throws BallEscape
// when an iterate has max |grad V| >= 1/2, NonConvergence on budget
// exhaustion.
FixedPointReport fixed_point_u0(const grid::WeightField& gamma, double p, const Vec& zeta,
                                const FixedPointConfig& cfg = {});

struct GradientMinimum {
    double value = 0.0;
    grid::NodeId node = 0;
};

// min |grad u| with the grid gradient, over all nodes or the interior only.
GradientMinimum min_gradient(const grid::ScalarField& u, bool interior_only = false);

// Boundary nodes of a 2D box in counterclockwise order, starting at the
// origin corner.
std::vector<grid::NodeId> boundary_cycle(const grid::Domain& d);

struct BoundaryExtrema {
    int maxima = 0;
    int minima = 0;
    // Some local extremum is attained on more than one consecutive node.
    bool flat = false;
    grid::NodeId argmax = 0;
    grid::NodeId argmin = 0;

    bool single_strict() const { return maxima == 1 && minima == 1 && !flat; }
};

// Local extrema of boundary data along the boundary cycle. Values within
// rel_tol of each other (relative to the data range) are merged into plateaus.
BoundaryExtrema scan_boundary_extrema(const grid::BoundaryData& phi, double rel_tol = 1e-12);

struct ExtremalData {
    grid::BoundaryData phi;
    Vec zeta;
    BoundaryExtrema scan;
};

Vec default_extremal_direction();

// phi0 = zeta.x on the boundary of a 2D box. Throws InvalidArgument for n != 2
// and DegenerateInput unless the scan finds exactly one strict local maximum
// and one strict local minimum.
ExtremalData extremal_boundary_data_2d(const grid::DomainPtr& domain,
                                       const Vec& zeta = default_extremal_direction());

}  // namespace plap::criticalfree
