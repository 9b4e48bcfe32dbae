#include "gyromodal/complexmode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace gyromodal {

namespace {

using Complexd = std::complex<double>;

Eigen::MatrixXcd quadratic_pencil(const SystemMatrices& sys, double lambda) {
    const Complexd i(0.0, 1.0);
    return sys.C.cast<Complexd>() - i * lambda * sys.B.cast<Complexd>() -
           lambda * lambda * sys.A.cast<Complexd>();
}

Eigen::MatrixXcd sesq_kernel_matrix(const SystemMatrices& sys, double lambda) {
    const Complexd i(0.0, 1.0);
    return sys.A.cast<Complexd>() + (i / (2.0 * lambda)) * sys.B.cast<Complexd>();
}

// Multiply z by a unit phase so its largest-modulus component is real
// and positive.
void apply_phase_gauge(Eigen::VectorXcd& z) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        const double mag = std::abs(z(k));
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    if (best_mag <= 0.0) return;
    z *= std::conj(z(best)) / best_mag;
}

}  // namespace

Eigen::MatrixXcd kernel_basis(const SystemMatrices& sys,
                              double lambda_alpha,
                              int n_alpha,
                              double tol) {
    if (!(lambda_alpha > 0.0)) {
        throw NotOscillatory("kernel frequency must be positive");
    }
    const Eigen::MatrixXcd Q = quadratic_pencil(sys, lambda_alpha);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Q, Eigen::ComputeFullV);
    const Eigen::VectorXd sigma = svd.singularValues();
    // Rank test against the pencil's natural scale: thresholding against
    // sigma_max alone breaks down when the pencil is singular as a whole
    // (n_alpha = n makes every singular value tiny).
    const double scale = sys.C.norm() + lambda_alpha * sys.B.norm() +
                         lambda_alpha * lambda_alpha * sys.A.norm();
    const double threshold = tol * std::max(sigma(0), scale);

    int null_dim = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        if (sigma(k) <= threshold) ++null_dim;
    }
    if (null_dim != n_alpha) {
        std::ostringstream os;
        os.precision(6);
        os << std::scientific << "numerical null space of the quadratic pencil at lambda="
           << lambda_alpha << " has dimension " << null_dim << ", expected " << n_alpha;
        throw KernelDimensionMismatch(os.str());
    }
    return svd.matrixV().rightCols(n_alpha);
}

KernelFamily kernel_family(const SystemMatrices& sys) {
    const int n = sys.n();
    const SpectralClusters clusters = system_clusters(sys);

    KernelFamily family;
    family.clusters.reserve(clusters.count());
    for (int a = 0; a < clusters.count(); ++a) {
        const double lambda = clusters.lambdas[a];
        const int mult = clusters.multiplicities[a];
        Eigen::MatrixXcd basis = kernel_basis(sys, lambda, mult);

        // Orthonormalize under the cluster product; two projection passes.
        const Eigen::MatrixXcd H = sesq_kernel_matrix(sys, lambda);
        for (int j = 0; j < mult; ++j) {
            Eigen::VectorXcd zj = basis.col(j);
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < j; ++k) {
                    const Eigen::VectorXcd zk = basis.col(k);
                    zj -= zk.dot(H * zj) * zk;
                }
            }
            const double nrm = std::sqrt(std::real(zj.dot(H * zj)));
            if (!(nrm > 0.0) || !std::isfinite(nrm)) {
                throw ConvergenceFailure("kernel basis lost rank during orthonormalization");
            }
            zj /= nrm;
            basis.col(j) = zj;
        }
        for (int j = 0; j < mult; ++j) {
            Eigen::VectorXcd zj = basis.col(j);
            apply_phase_gauge(zj);
            basis.col(j) = zj;
        }
        family.clusters.push_back(KernelFamily::Cluster{lambda, basis, Eigen::MatrixXcd()});
    }

    // Oblique projectors of the direct sum: P_a = Z_a * (rows of Z^-1).
    Eigen::MatrixXcd Z(n, n);
    int col = 0;
    for (const auto& cl : family.clusters) {
        Z.middleCols(col, cl.basis.cols()) = cl.basis;
        col += static_cast<int>(cl.basis.cols());
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Z);
    const Eigen::MatrixXcd Zinv = lu.solve(Eigen::MatrixXcd::Identity(n, n));
    col = 0;
    for (auto& cl : family.clusters) {
        const int mult = static_cast<int>(cl.basis.cols());
        cl.projector = cl.basis * Zinv.middleRows(col, mult);
        col += mult;
    }
    return family;
}

std::vector<ComplexMode> complex_basis(const SystemMatrices& sys) {
    const KernelFamily family = kernel_family(sys);
    std::vector<ComplexMode> modes;
    modes.reserve(sys.n());
    for (const auto& cl : family.clusters) {
        for (Eigen::Index j = 0; j < cl.basis.cols(); ++j) {
            modes.push_back(ComplexMode{cl.lambda, cl.basis.col(j)});
        }
    }
    return modes;
}

std::complex<double> sesq_inner(const SystemMatrices& sys,
                                double lambda_alpha,
                                const Eigen::VectorXcd& z,
                                const Eigen::VectorXcd& w) {
    if (z.size() != sys.n() || w.size() != sys.n()) {
        throw DimensionMismatch("sesq_inner: vector size does not match the system");
    }
    return z.dot(sesq_kernel_matrix(sys, lambda_alpha) * w);
}

std::complex<double> glued_sesq_inner(const SystemMatrices& sys,
                                      const KernelFamily& family,
                                      const Eigen::VectorXcd& z,
                                      const Eigen::VectorXcd& w) {
    if (z.size() != sys.n() || w.size() != sys.n()) {
        throw DimensionMismatch("glued_sesq_inner: vector size does not match the system");
    }
    Complexd total(0.0, 0.0);
    for (const auto& cl : family.clusters) {
        const Eigen::VectorXcd pz = cl.projector * z;
        const Eigen::VectorXcd pw = cl.projector * w;
        total += pz.dot(sesq_kernel_matrix(sys, cl.lambda) * pw);
    }
    return total;
}

ComplexMode real_to_complex(const ModePair& pair, double tol) {
    const Eigen::Index n = pair.u.size() / 2;
    if (pair.u.size() != 2 * n || pair.v.size() != pair.u.size() || n < 1) {
        throw DimensionMismatch("real_to_complex: pair vectors must share an even dimension");
    }
    const double lambda = pair.omega;
    const Eigen::VectorXd x = pair.u.head(n);
    const Eigen::VectorXd y = pair.v.head(n);
    const double scale = (1.0 + lambda) * std::max({pair.u.norm(), pair.v.norm(), 1e-300});
    const double res_u = (pair.u.tail(n) - lambda * y).norm();
    const double res_v = (pair.v.tail(n) + lambda * x).norm();
    if (res_u > tol * scale || res_v > tol * scale) {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << "pair blocks violate the (x, lambda y) / (y, -lambda x) "
           << "structure: residuals " << res_u << ", " << res_v;
        throw StructureViolation(os.str());
    }
    ComplexMode mode;
    mode.omega = lambda;
    mode.z = x + Complexd(0.0, 1.0) * y;
    return mode;
}

ModePair complex_to_real(const SystemMatrices& sys, const ComplexMode& mode) {
    if (mode.z.size() != sys.n()) {
        throw DimensionMismatch("complex_to_real: mode size does not match the system");
    }
    const Eigen::Index n = mode.z.size();
    const double lambda = mode.omega;
    const Eigen::VectorXd x = mode.z.real();
    const Eigen::VectorXd y = mode.z.imag();
    ModePair pair;
    pair.omega = lambda;
    pair.u.resize(2 * n);
    pair.u << x, lambda * y;
    pair.v.resize(2 * n);
    pair.v << y, -lambda * x;
    return pair;
}

bool is_classical_mode(const SystemMatrices& sys, const ComplexMode& mode, double tol) {
    if (mode.z.size() != sys.n()) {
        throw DimensionMismatch("is_classical_mode: mode size does not match the system");
    }
    const double znorm = mode.z.norm();
    if (znorm == 0.0) return true;
    const double w = mode.omega;
    const double b_norm = sys.B.norm();
    const double b_res = (sys.B.cast<Complexd>() * mode.z).norm();
    const Eigen::MatrixXcd R = sys.C.cast<Complexd>() - w * w * sys.A.cast<Complexd>();
    const double r_res = (R * mode.z).norm();
    const double r_scale = sys.C.norm() + w * w * sys.A.norm();
    return b_res <= tol * b_norm * znorm && r_res <= tol * r_scale * znorm;
}

}  // namespace gyromodal
