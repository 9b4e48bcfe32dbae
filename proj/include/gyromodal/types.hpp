#pragma once

#include <Eigen/Dense>

namespace gyromodal {

/// The validated matrix triple (A, B, C) of the linearized equations
///   A eta'' + B eta' + C eta = 0
/// with A, C symmetric positive definite and B antisymmetric.
/// Construct through validate_system(), linearize_at_equilibrium() or
/// random_system(); the stored matrices carry the exact structure
/// (symmetrized / antisymmetrized).
struct SystemMatrices {
    Eigen::MatrixXd A;  ///< kinetic (mass) matrix
    Eigen::MatrixXd B;  ///< gyroscopic matrix
    Eigen::MatrixXd C;  ///< stiffness matrix

    int n() const { return static_cast<int>(A.rows()); }
};

/// A phase point of the linearized system: displacement eta = q - q* and
/// velocity eta'.
struct StateVector {
    Eigen::VectorXd eta;
    Eigen::VectorXd etadot;

    /// Stacked 2n representation (eta; etadot).
    Eigen::VectorXd stacked() const {
        Eigen::VectorXd y(eta.size() + etadot.size());
        y << eta, etadot;
        return y;
    }

    static StateVector from_stacked(const Eigen::VectorXd& y) {
        const Eigen::Index n = y.size() / 2;
        return StateVector{y.head(n), y.tail(n)};
    }
};

/// One modal pair in the 2n phase space: M u = omega v, M v = -omega u,
/// with u, v orthonormal under the Gram scalar product.
struct ModePair {
    double omega = 0.0;  ///< angular frequency [rad / time unit]
    Eigen::VectorXd u;
    Eigen::VectorXd v;
};

/// One complex normal mode in n-space: (C - i omega B - omega^2 A) z = 0.
struct ComplexMode {
    double omega = 0.0;
    Eigen::VectorXcd z;  ///< z = h + i r
};

/// Block split of a modal pair: u = (h, l), v = (r, s) with l = omega r
/// and s = -omega h.
struct ModeShape {
    double omega = 0.0;
    Eigen::VectorXd h;
    Eigen::VectorXd r;
    Eigen::VectorXd l;
    Eigen::VectorXd s;
};

/// Amplitudes and phases of the general integral
///   eta(t) = sum_k a_k [cos(omega_k t + phi_k) h_k + sin(omega_k t + phi_k) r_k].
/// Phases live in (-pi, pi]; a_k = 0 forces phi_k = 0.
struct HarmonicParams {
    Eigen::VectorXd amplitude;
    Eigen::VectorXd phase;

    int modes() const { return static_cast<int>(amplitude.size()); }
};

/// Complex constants of the n-dimensional complex integral:
/// gamma_k = a_k exp(-i phi_k); delta_k = conj(gamma_k) for real motions.
struct ComplexAmplitudes {
    Eigen::VectorXcd gamma;
    Eigen::VectorXcd delta;
};

}  // namespace gyromodal
