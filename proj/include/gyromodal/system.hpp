#pragma once

#include <functional>

#include "gyromodal/errors.hpp"
#include "gyromodal/types.hpp"

namespace gyromodal {

/// Numeric description of a scleronomous Lagrangian
///   L = 1/2 a_kr(q) qdot^k qdot^r + b_r(q) qdot^r + L0(q)
/// subject to gyroscopic generalized forces Q (Q_r qdot^r = 0).
/// All members are plain callables; no symbolic structure is assumed.
struct LagrangianModel {
    int n = 0;
    std::function<double(const Eigen::VectorXd&)> L0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> b;
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> a;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> Q;

    /// Convenience factory: b = 0, a = identity, Q = 0.
    static LagrangianModel conservative(int n, std::function<double(const Eigen::VectorXd&)> L0);
};

/// A candidate equilibrium configuration (user units).
struct EquilibriumPoint {
    Eigen::VectorXd q_star;
};

/// Validate the triple (A, B, C): square and equally sized, A and C
/// symmetric positive definite, B antisymmetric, all within `tol`
/// (relative to the infinity norm, floored at 1). Matrices within
/// tolerance are projected onto the exact structure.
///
/// Throws DimensionMismatch, NotSymmetric, NotAntisymmetric,
/// NotPositiveDefinite; messages name the offending matrix and the
/// violating quantity.
SystemMatrices validate_system(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& C,
                               double tol = 1e-10);

/// True iff q_star is a strict local maximum of L0: the central-difference
/// gradient has norm < tol and the finite-difference Hessian is negative
/// definite. `h` is the base step, scaled per coordinate as h*(1+|q_r|).
bool check_equilibrium(const LagrangianModel& model,
                       const EquilibriumPoint& q_star,
                       double h = 1e-5,
                       double tol = 1e-6);

/// Build (A, B, C) at the equilibrium by central differences:
///   A    = a(q*)
///   C_kr = -d2 L0 / dq^k dq^r
///   B_kr = (db_k/dq^r - db_r/dq^k) - dQ_k/dqdot^r   at (q*, 0).
/// Throws ForceNotGyroscopic when the velocity Jacobian of Q is not
/// antisymmetric within tol (or Q does work along the probe velocities);
/// propagates validate_system errors; throws NotAnEquilibrium when
/// check_equilibrium fails.
SystemMatrices linearize_at_equilibrium(const LagrangianModel& model,
                                        const EquilibriumPoint& q_star,
                                        double h = 1e-5,
                                        double tol = 1e-6);

}  // namespace gyromodal
