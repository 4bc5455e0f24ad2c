#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "plap/grid.hpp"
#include "plap/psolve.hpp"

namespace plap::planecheck {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// det(I + (p-2) v v^T) for a unit 2-vector; equals p - 1. Throws
// InvalidArgument when |v| differs from 1 by more than 1e-12.
double det_identity_2d(const Vec2& v, double p);

// v v^T / |v|^2. Throws InvalidArgument at v = 0.
Mat2 projector(const Vec2& v);

struct ProjectorPair {
    Mat2 F;
    Mat2 P;
    double alpha = 1.0;
    double p = 3.0;
};

// F = theta P + eta (I - P).
Mat2 candidate(double theta, double eta, const Mat2& P);

// Frobenius norms.
struct FpResiduals {
    // F + alpha (p-2) F P F - I - (p-2) P
    double master = 0.0;
    double pf_pfp = 0.0;
    double fp_pf = 0.0;
};

FpResiduals fp_identity_residuals(const ProjectorPair& pair);

struct ThetaEta {
    bool consistent = false;
    double theta = 0.0;
    double eta = 0.0;
    // theta + alpha (p-2) theta^2 - (p-1) at theta = 1.
    double defect = 0.0;
    // Real roots of alpha (p-2) theta^2 + theta - (p-1) = 0.
    std::vector<double> quadratic_roots;
};

// eta = 1 from the (I - P) block, theta = 1 from det F = theta eta = 1, and
// the (P) block then demands 1 + alpha (p-2) = p - 1. Consistent iff that
// holds to 1e-12 relative. Throws InvalidArgument for alpha <= 0 or p = 2.
ThetaEta solve_theta_eta(double alpha, double p);

struct EnergyPairing {
    double interior = 0.0;
    double boundary = 0.0;
    double relative_gap = 0.0;
};

// int gamma |grad u|^p over the simplices against sum f * Lambda_gamma f over
// the boundary, for the solution with trace f.
EnergyPairing energy_pairing_check(const grid::WeightField& gamma, double p,
                                   const grid::BoundaryData& f,
                                   const psolve::PSolveConfig& cfg = {});

}  // namespace plap::planecheck
