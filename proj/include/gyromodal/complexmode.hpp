#pragma once

#include <complex>
#include <vector>

#include "gyromodal/spectral.hpp"
#include "gyromodal/types.hpp"

namespace gyromodal {

/// The kernels N_alpha of C - i lambda_alpha B - lambda_alpha^2 A,
/// one per clustered frequency, together decomposing C^n as a direct sum.
struct KernelFamily {
    struct Cluster {
        double lambda = 0.0;        ///< clustered frequency
        Eigen::MatrixXcd basis;     ///< n x n_alpha, orthonormal under the cluster product
        Eigen::MatrixXcd projector; ///< oblique projector onto N_alpha along the others
    };
    std::vector<Cluster> clusters;

    int n() const {
        return clusters.empty() ? 0 : static_cast<int>(clusters.front().basis.rows());
    }
};

/// Default relative singular-value threshold for null-space extraction.
inline constexpr double kKernelTol = 1e-10;

/// Span of the numerical null space of C - i lambda B - lambda^2 A:
/// right singular vectors whose singular values fall below
/// tol * sigma_max. Throws KernelDimensionMismatch when the numerical
/// dimension differs from n_alpha.
Eigen::MatrixXcd kernel_basis(const SystemMatrices& sys,
                              double lambda_alpha,
                              int n_alpha,
                              double tol = kKernelTol);

/// All kernels of the system with orthonormalized (per-cluster sesquilinear
/// product), phase-gauged bases and the oblique projectors of the direct
/// sum decomposition.
KernelFamily kernel_family(const SystemMatrices& sys);

/// The n complex modes: per cluster, an orthonormal basis of N_alpha under
/// the sesquilinear product, flattened in ascending omega.
std::vector<ComplexMode> complex_basis(const SystemMatrices& sys);

/// Per-cluster sesquilinear product conj(z)^T (A + i B / (2 lambda)) w.
/// Hermitian; real and positive on the diagonal for kernel members.
std::complex<double> sesq_inner(const SystemMatrices& sys,
                                double lambda_alpha,
                                const Eigen::VectorXcd& z,
                                const Eigen::VectorXcd& w);

/// The glued scalar product on C^n: per-cluster forms combined through the
/// projectors, with the kernels declared mutually orthogonal.
std::complex<double> glued_sesq_inner(const SystemMatrices& sys,
                                      const KernelFamily& family,
                                      const Eigen::VectorXcd& z,
                                      const Eigen::VectorXcd& w);

/// Map a modal pair u = (x, lambda y), v = (y, -lambda x) to the complex
/// mode z = x + i y. Throws StructureViolation when the blocks do not have
/// that shape within tol (relative).
ComplexMode real_to_complex(const ModePair& pair, double tol = 1e-8);

/// Inverse map: z = x + i y to u = (x, lambda y), v = (y, -lambda x).
/// A sesq-normalized mode yields a G-orthonormal pair.
ModePair complex_to_real(const SystemMatrices& sys, const ComplexMode& mode);

/// True iff the mode is a classical normal mode: B z = 0 and
/// (C - omega^2 A) z = 0 within tol (h and r parallel).
bool is_classical_mode(const SystemMatrices& sys,
                       const ComplexMode& mode,
                       double tol = 1e-8);

}  // namespace gyromodal
