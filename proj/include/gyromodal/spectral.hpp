#pragma once

#include <complex>
#include <vector>

#include "gyromodal/errors.hpp"
#include "gyromodal/types.hpp"

namespace gyromodal {

/// The 2n x 2n first-order phase-space operator
///   M = [[0, I], [-A^-1 C, -A^-1 B]].
struct EvolutionOperator {
    Eigen::MatrixXd M;
};

/// The antisymmetric pairing K = [[B, A], [-A, 0]].
struct Pairing {
    Eigen::MatrixXd K;
};

/// The symmetric positive definite matrix G = K M^-1 defining the working
/// scalar product (x, y) = x^T G y. Built by the congruence
/// K diag(C^-1, A^-1) K^T.
struct GramMatrix {
    Eigen::MatrixXd G;
};

/// Distinct clustered frequencies lambda_alpha (ascending) with
/// multiplicities n_alpha, sum n_alpha = n. Each M^2 eigenspace has
/// dimension 2 n_alpha.
struct SpectralClusters {
    std::vector<double> lambdas;
    std::vector<int> multiplicities;

    int count() const { return static_cast<int>(lambdas.size()); }
};

/// Default relative tolerance for frequency clustering.
inline constexpr double kClusterTol = 1e-8;

/// Assemble M by solving against A (Cholesky; no explicit inverse).
EvolutionOperator build_evolution_operator(const SystemMatrices& sys);

/// Assemble K = [[B, A], [-A, 0]] exactly.
Pairing build_pairing(const SystemMatrices& sys);

/// Build G through the congruence K diag(C^-1, A^-1) K^T, symmetrize,
/// and assert positive definiteness.
GramMatrix build_gram(const SystemMatrices& sys);

/// Scalar product x^T G y.
double g_inner(const GramMatrix& gram, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// sqrt((x, x)_G).
double g_norm(const GramMatrix& gram, const Eigen::VectorXd& x);

/// Validate that the given spectrum is purely imaginary (within
/// tol_cluster relative to max |mu|) and group the positive imaginary
/// parts into clusters of ascending distinct frequencies. Throws
/// NotOscillatory otherwise.
SpectralClusters cluster_frequencies(const std::vector<std::complex<double>>& eigenvalues,
                                     double tol_cluster = kClusterTol);

/// Clustered frequencies of a validated system (from the spectrum of its
/// evolution operator, at the default clustering tolerance).
SpectralClusters system_clusters(const SystemMatrices& sys);

/// Compute the full modal basis of the system: n pairs, ascending omega,
/// G-orthonormal, with M u_k = omega_k v_k and M v_k = -omega_k u_k.
/// Pairs are gauged so the largest-modulus component of h + i r is real
/// and positive; ties in omega are ordered lexicographically by u.
std::vector<ModePair> modal_basis(const SystemMatrices& sys);

}  // namespace gyromodal
