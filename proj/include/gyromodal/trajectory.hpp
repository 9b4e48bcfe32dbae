#pragma once

#include <functional>
#include <vector>

#include "gyromodal/spectral.hpp"
#include "gyromodal/types.hpp"

namespace gyromodal {

/// Split each pair into its n-dimensional blocks u = (h, l), v = (r, s)
/// and assert l = omega r, s = -omega h. Throws StructureViolation when a
/// residual exceeds 1e-12 relative to the pair scale.
std::vector<ModeShape> mode_shapes(const std::vector<ModePair>& basis);

/// Project an initial condition onto the modal basis:
///   chi_k(0) = (ic, u_k)_G,  psi_k(0) = (ic, v_k)_G,
///   a_k = hypot(chi, psi),   phi_k = atan2(psi, chi) in (-pi, pi].
HarmonicParams project_initial_conditions(const GramMatrix& gram,
                                          const std::vector<ModePair>& basis,
                                          const StateVector& ic);

/// Closed-form state at time t:
///   eta(t)  = sum a_k [ cos(w t + phi) h + sin(w t + phi) r ]
///   eta'(t) = sum a_k w [ -sin(w t + phi) h + cos(w t + phi) r ].
StateVector evaluate_state(const std::vector<ModeShape>& shapes,
                           const HarmonicParams& params,
                           double t);

/// Analytic second derivative of the closed form,
///   eta''(t) = -sum a_k w^2 [ cos(w t + phi) h + sin(w t + phi) r ].
Eigen::VectorXd evaluate_acceleration(const std::vector<ModeShape>& shapes,
                                      const HarmonicParams& params,
                                      double t);

/// Per-mode trajectory callables; their pointwise sum equals eta(t).
std::vector<std::function<Eigen::VectorXd(double)>> normal_harmonics(
    const std::vector<ModeShape>& shapes, const HarmonicParams& params);

/// gamma_k = a_k exp(-i phi_k), delta_k = conj(gamma_k).
ComplexAmplitudes complex_amplitudes(const HarmonicParams& params);

/// Mechanical energy 1/2 eta'^T A eta' + 1/2 eta^T C eta; conserved along
/// every solution because B does no work.
double energy(const SystemMatrices& sys, const StateVector& state);

}  // namespace gyromodal
