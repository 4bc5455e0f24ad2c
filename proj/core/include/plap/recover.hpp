#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plap/expr.hpp"
#include "plap/grid.hpp"
#include "plap/jet.hpp"

namespace plap::recover {

using jets::Jet;

// Tilted analytic scenario: gamma(x) = profile(zeta.x), where the profile is
// an expression in x1 standing for s = zeta.x, and u0(x) = G(zeta.x) with
// G' = (c / profile)^{1/(p-1)} and G(zeta.z) = zeta.z. The flux
// gamma |grad u0|^{p-2} grad u0 is then the constant c zeta. The boundary
// point z lies on a flat face with normal e1; n = zeta.size() (2 or 3).
struct Scenario {
    std::string profile = "1";
    double c = 1.0;
    Vec zeta;
    double p = 3.0;
    Vec z;
    // gamma jets to order N, u0 jets to order N + 1.
    int order = 6;

    // Throws InvalidArgument on a non-unit zeta, c <= 0, p <= 1, mismatched
    // sizes or a negative order.
    void validate() const;
};

struct OracleJets {
    Jet gamma;
    Jet u;
};

OracleJets oracle_tilted_profile(const Scenario& sc);

// div(gamma |grad u|^{p-2} grad u) as a jet (order of u minus two).
Jet pde_residual(const Jet& gamma, const Jet& u, double p);

// Gauge-fixed measurements at z. Tangential jets are in the n-1 variables
// x2..xn; A is the full jet so slice(A[j][k], m) is its normal order m.
struct BoundaryJets {
    int nvars = 0;
    int order = 0;
    double p = 0.0;
    std::array<std::array<Jet, 3>, 3> A;
    // Trace of u0 on the face, order N + 1.
    Jet dirichlet;
    // gamma |grad u0|^{p-2} d1 u0 on the face, order N.
    Jet flux;
};

BoundaryJets synthesize_measurements(const Jet& gamma, const Jet& u, double p);

struct Order0 {
    double gamma = 0.0;
    double d1u = 0.0;
    double grad_norm = 0.0;
    // The same quantities as tangential jets of order N.
    Jet gamma_trace;
    Jet d1u_trace;
};

struct RecoverConfig {
    enum class Mode { A, B };
    Mode mode = Mode::A;
    double condition_bound = 1e8;
    // |grad' u0(z)| below this raises TangentialDegenerate.
    double tangential_tol = 1e-10;
    // |d1 u0(z)| below this (relative to |grad u0|) raises NormalGradientZero.
    double normal_tol = 1e-12;
};

Order0 recover_order0(const BoundaryJets& bj, const RecoverConfig& cfg = {});

// Theta entries at a point where the tangential direction j (0-based, j >= 1)
// has d_j u0 = 0. Rows: interior equation, A_11, A_jj. Columns: d1^m gamma,
// d1^{m+1} u0, gauge term. Throws NormalGradientZero when d1 u0 = 0.
Eigen::Matrix3d theta_matrix(double gamma, const Vec& grad, double p, int j);

// Cofactor expansion along the first row.
double theta_det_direct(const Eigen::Matrix3d& theta);

// lambda (2|grad u|^2 + (p-2) u1^2 + p(p-2) u1^4 / |grad u|^2) with
// lambda = gamma^2 |grad u|^{3p-8}, as printed in the source derivation.
double theta_det_paper(double gamma, const Vec& grad, double p);

// lambda * 2 (|grad u|^2 + (p-2) u1^4 / |grad u|^2), which agrees with the
// cofactor expansion.
double theta_det_factored(double gamma, const Vec& grad, double p);

// An affine map (xi1, xi2) -> rows, with xi1, xi2 and every row tangential
// jets of one shape: rows = offset + col1 * xi1 + col2 * xi2.
using ForwardMap = std::function<std::vector<Jet>(const Jet& xi1, const Jet& xi2)>;

struct AffineMap {
    std::vector<Jet> offset;
    std::vector<Jet> col1;
    std::vector<Jet> col2;

    std::vector<Jet> apply(const Jet& xi1, const Jet& xi2) const;
};

// Exact extraction by probing at (0,0), (1,0), (0,1). `shape` fixes the jet
// shape of the probes.
AffineMap extract_affine_coefficients(const ForwardMap& f, const Jet& shape);

struct ThetaSystem {
    int order = 0;
    // Constant terms of the jet system; equals theta_matrix in coordinates
    // where the third axis is the tangent perpendicular to grad' u0.
    Eigen::Matrix3d theta;
    Eigen::Vector3d rhs;
    // Tangent perpendicular to grad' u0 at z, in (x1, x2, x3).
    Vec tangent;
    // Jet form: columns 1..3 and the right-hand side.
    std::array<std::array<Jet, 3>, 3> columns;
    std::array<Jet, 3> rhs_jets;
};

struct RecoveryState {
    int nvars = 0;
    int order = 0;
    double p = 0.0;
    // Highest normal order completed, -1 before order 0.
    int completed = -1;
    Jet gamma;
    Jet u;
    Order0 order0;
    // Indexed by m - 1 for m = 1..completed.
    std::vector<double> conditions;
    std::vector<double> gauge_residuals;
    std::vector<double> det_direct;
    std::vector<double> det_paper;
};

// State after the order-0 step.
RecoveryState start_recovery(const BoundaryJets& bj, const RecoverConfig& cfg = {});

// Assemble the order-m system from the state (complete through m-1).
ThetaSystem build_theta_system(const RecoveryState& state, const BoundaryJets& bj, int m);

// Solve the order-m system and store d1^m gamma and d1^{m+1} u0 on the face.
// Mode B needs the oracle and copies its tangential coefficients of these
// slices after solving for the constant terms. Throws IllConditioned when the
// constant-term system has condition number above cfg.condition_bound; order
// m >= 1 needs n = 3.
RecoveryState recover_order_m(RecoveryState state, const BoundaryJets& bj, int m,
                              const RecoverConfig& cfg = {},
                              const OracleJets* oracle = nullptr);

// Order 0 and then every order up to bj.order.
RecoveryState recover_all(const BoundaryJets& bj, const RecoverConfig& cfg = {},
                          const OracleJets* oracle = nullptr);

// Normal Taylor sums sum_k d1^k gamma(z) (-s)^k / k! at each depth s.
std::vector<double> taylor_reconstruct(const RecoveryState& state,
                                       const std::vector<double>& depths);

}  // namespace plap::recover
