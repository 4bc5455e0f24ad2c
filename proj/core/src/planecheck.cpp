#include "plap/planecheck.hpp"

#include <cmath>

namespace plap::planecheck {

double det_identity_2d(const Vec2& v, double p) {
    if (std::abs(v.norm() - 1.0) > 1e-12) {
        throw InvalidArgument("det_identity_2d expects a unit vector");
    }
    const double q = p - 2.0;
    const Mat2 m = Mat2::Identity() + q * v * v.transpose();
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

Mat2 projector(const Vec2& v) {
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) {
        throw InvalidArgument("projector onto the zero vector");
    }
    return v * v.transpose() / n2;
}

Mat2 candidate(double theta, double eta, const Mat2& P) {
    return theta * P + eta * (Mat2::Identity() - P);
}

FpResiduals fp_identity_residuals(const ProjectorPair& pr) {
    const Mat2& F = pr.F;
    const Mat2& P = pr.P;
    FpResiduals r;
    r.master = (F + pr.alpha * (pr.p - 2.0) * F * P * F - Mat2::Identity() - (pr.p - 2.0) * P)
                   .norm();
    r.pf_pfp = (P * F - P * F * P).norm();
    r.fp_pf = (F * P - P * F).norm();
    return r;
}

ThetaEta solve_theta_eta(double alpha, double p) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw InvalidArgument("alpha must be positive");
    }
    if (!(p > 1.0) || p == 2.0) {
        throw InvalidArgument("p must exceed 1 and avoid 2");
    }
    ThetaEta out;
    const double a = alpha * (p - 2.0);
    const double disc = 1.0 + 4.0 * a * (p - 1.0);
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        out.quadratic_roots = {(-1.0 - s) / (2.0 * a), (-1.0 + s) / (2.0 * a)};
    }
    out.defect = 1.0 + a - (p - 1.0);
    out.consistent = std::abs(out.defect) <= 1e-12 * std::max(1.0, std::abs(p));
    if (out.consistent) {
        out.theta = 1.0;
        out.eta = 1.0;
    }
    return out;
}

EnergyPairing energy_pairing_check(const grid::WeightField& gamma, double p,
                                   const grid::BoundaryData& f, const psolve::PSolveConfig& cfg) {
    const auto sol = psolve::solve_p_laplace(gamma, p, f, cfg);
    EnergyPairing e;
    e.interior = p * psolve::p_energy(gamma, p, sol.u, 0.0);
    e.boundary = grid::boundary_pairing(f, psolve::boundary_flux(gamma, p, sol.u, cfg.eps_reg));
    e.relative_gap = std::abs(e.interior - e.boundary) / std::abs(e.interior);
    return e;
}

}  // namespace plap::planecheck
