#pragma once

#include <Eigen/Dense>

#include "gyromodal/system.hpp"

namespace testutil {

/// 1-DOF fixture A=[1], B=[0], C=[4]: omega = 2, gauged basis
/// u = (1, 0), v = (0, -2), Gram = diag(1, 1/4).
inline gyromodal::SystemMatrices fixture_1dof() {
    Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1);
    A << 1.0;
    B << 0.0;
    C << 4.0;
    return gyromodal::validate_system(A, B, C);
}

/// 2-DOF gyroscopic fixture A = C = I, B = [[0, 1.5], [-1.5, 0]]:
/// omega^2 are the roots of w^4 - 4.25 w^2 + 1 = 0, i.e. {0.25, 4}.
inline gyromodal::SystemMatrices fixture_2dof_gyro() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd B(2, 2);
    B << 0.0, 1.5, -1.5, 0.0;
    return gyromodal::validate_system(A, B, C);
}

/// Decoupled classical 2-DOF fixture A = I, B = 0, C = diag(4, 1):
/// omega = 1 and 2 along the coordinate axes.
inline gyromodal::SystemMatrices fixture_2dof_classical() {
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2, 2);
    C(0, 0) = 4.0;
    C(1, 1) = 1.0;
    return gyromodal::validate_system(A, B, C);
}

/// Positive roots of w^4 - (2 + b^2) w^2 + 1 = 0, the frequency equation of
/// the fixture family A = C = I2, B = [[0, b], [-b, 0]]. Independent oracle
/// for the 2-DOF gyroscopic frequencies.
inline std::pair<double, double> gyro_2dof_frequencies(double b) {
    const double s = 2.0 + b * b;
    const double disc = std::sqrt(s * s - 4.0);
    const double w2_low = (s - disc) / 2.0;
    const double w2_high = (s + disc) / 2.0;
    return {std::sqrt(w2_low), std::sqrt(w2_high)};
}

}  // namespace testutil
