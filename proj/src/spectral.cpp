#include "gyromodal/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gyromodal {

namespace {

Eigen::LLT<Eigen::MatrixXd> cholesky_or_throw(const Eigen::MatrixXd& X, const char* name) {
    Eigen::LLT<Eigen::MatrixXd> llt(X);
    if (llt.info() != Eigen::Success) {
        throw SingularMatrix(std::string("Cholesky factorization of ") + name + " failed");
    }
    return llt;
}

// One invariant 2-plane of the skew representation, identified by its
// frequency and one unit vector; the partner direction is recovered from
// the block structure, and the gauge fixes the rotation inside the plane.
struct SkewPlane {
    double omega = 0.0;
    Eigen::VectorXd u;
};

// The evolution operator is antisymmetric under the Gram product, so in
// the Cholesky frame x -> L^T x it becomes a real skew-symmetric matrix.
// Its real Schur form is block-diagonal with 2x2 rotation blocks and an
// orthogonal basis, which delivers the invariant 2-planes with
// machine-precision orthonormality for any eigenvalue clustering.
std::vector<SkewPlane> skew_planes(const SystemMatrices& sys,
                                   const Eigen::LLT<Eigen::MatrixXd>& llt) {
    const Eigen::MatrixXd M = build_evolution_operator(sys).M;
    const Eigen::MatrixXd Y = llt.matrixU() * M;
    const Eigen::MatrixXd Mt = llt.matrixL().solve(Y.transpose()).transpose();
    const Eigen::MatrixXd Ma = 0.5 * (Mt - Mt.transpose());

    Eigen::RealSchur<Eigen::MatrixXd> schur(Ma);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceFailure("Schur decomposition of the evolution operator failed");
    }
    const Eigen::MatrixXd& T = schur.matrixT();
    const Eigen::MatrixXd& U = schur.matrixU();
    const Eigen::Index dim = T.rows();

    std::vector<SkewPlane> planes;
    planes.reserve(dim / 2);
    Eigen::Index i = 0;
    while (i < dim) {
        if (i + 1 >= dim || T(i + 1, i) == 0.0) {
            throw NotOscillatory("evolution operator has a real eigenvalue block");
        }
        const double t12 = T(i, i + 1);
        const double t21 = T(i + 1, i);
        if (!(t12 * t21 < 0.0)) {
            throw NotOscillatory("evolution operator block is not a rotation");
        }
        planes.push_back(SkewPlane{std::sqrt(-t12 * t21), U.col(i)});
        i += 2;
    }
    return planes;
}

// Rotate (u, v) inside their invariant 2-plane so that the largest-modulus
// component of h + i r is real and positive.
void apply_gauge(ModePair& pair) {
    const Eigen::Index n = pair.u.size() / 2;
    double best_mag = -1.0;
    double best_h = 0.0, best_r = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double hk = pair.u(k);
        const double rk = pair.v(k);
        const double mag = std::hypot(hk, rk);
        if (mag > best_mag) {
            best_mag = mag;
            best_h = hk;
            best_r = rk;
        }
    }
    if (best_mag <= 0.0) return;
    // z -> z * exp(-i theta) with theta = arg(z_best).
    const double c = best_h / best_mag;
    const double s = best_r / best_mag;
    const Eigen::VectorXd u_new = c * pair.u + s * pair.v;
    const Eigen::VectorXd v_new = -s * pair.u + c * pair.v;
    pair.u = u_new;
    pair.v = v_new;
}

bool lexicographic_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

}  // namespace

EvolutionOperator build_evolution_operator(const SystemMatrices& sys) {
    const int n = sys.n();
    auto llt = cholesky_or_throw(sys.A, "A");
    EvolutionOperator evo;
    evo.M = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    evo.M.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    evo.M.bottomLeftCorner(n, n) = -llt.solve(sys.C);
    evo.M.bottomRightCorner(n, n) = -llt.solve(sys.B);
    return evo;
}

Pairing build_pairing(const SystemMatrices& sys) {
    const int n = sys.n();
    Pairing pairing;
    pairing.K = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    pairing.K.topLeftCorner(n, n) = sys.B;
    pairing.K.topRightCorner(n, n) = sys.A;
    pairing.K.bottomLeftCorner(n, n) = -sys.A;
    return pairing;
}

GramMatrix build_gram(const SystemMatrices& sys) {
    const int n = sys.n();
    const Eigen::MatrixXd K = build_pairing(sys).K;

    // K diag(C^-1, A^-1) K^T via solves against the definite blocks.
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    auto lltC = cholesky_or_throw(sys.C, "C");
    auto lltA = cholesky_or_throw(sys.A, "A");
    const Eigen::MatrixXd Kt = K.transpose();
    D.topRows(n) = lltC.solve(Kt.topRows(n));
    D.bottomRows(n) = lltA.solve(Kt.bottomRows(n));

    GramMatrix gram;
    gram.G = K * D;
    gram.G = 0.5 * (gram.G + gram.G.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.G, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double floor = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(lmin > floor)) {
        std::ostringstream os;
        os.precision(3);
        os << std::scientific << "Gram matrix lost definiteness: min eigenvalue " << lmin;
        throw NotPositiveDefinite(os.str());
    }
    return gram;
}

double g_inner(const GramMatrix& gram, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != gram.G.rows() || y.size() != gram.G.cols()) {
        throw DimensionMismatch("g_inner: vector size does not match the Gram matrix");
    }
    return x.dot(gram.G * y);
}

double g_norm(const GramMatrix& gram, const Eigen::VectorXd& x) {
    return std::sqrt(std::max(0.0, g_inner(gram, x, x)));
}

SpectralClusters cluster_frequencies(const std::vector<std::complex<double>>& eigenvalues,
                                     double tol_cluster) {
    if (eigenvalues.empty() || eigenvalues.size() % 2 != 0) {
        throw DimensionMismatch("expected a non-empty, even-sized spectrum");
    }
    double max_abs = 0.0;
    for (const auto& mu : eigenvalues) max_abs = std::max(max_abs, std::abs(mu));
    const double band = tol_cluster * max_abs;

    std::vector<double> positive;
    std::size_t negative = 0;
    for (const auto& mu : eigenvalues) {
        if (std::abs(mu.real()) >= band || band == 0.0) {
            std::ostringstream os;
            os.precision(6);
            os << std::scientific << "eigenvalue " << mu.real() << (mu.imag() < 0 ? "" : "+")
               << mu.imag() << "i is not purely imaginary";
            throw NotOscillatory(os.str());
        }
        if (mu.imag() > 0.0) positive.push_back(mu.imag());
        if (mu.imag() < 0.0) ++negative;
    }
    if (positive.size() != negative || 2 * positive.size() != eigenvalues.size()) {
        throw NotOscillatory("spectrum does not split into conjugate imaginary pairs");
    }
    std::sort(positive.begin(), positive.end());

    SpectralClusters clusters;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= positive.size(); ++i) {
        if (i == positive.size() || positive[i] - positive[start] >= band) {
            const auto count = static_cast<int>(i - start);
            const double mean =
                std::accumulate(positive.begin() + start, positive.begin() + i, 0.0) / count;
            clusters.lambdas.push_back(mean);
            clusters.multiplicities.push_back(count);
            start = i;
        }
    }
    return clusters;
}

SpectralClusters system_clusters(const SystemMatrices& sys) {
    const GramMatrix gram = build_gram(sys);
    auto llt = cholesky_or_throw(gram.G, "G");
    const auto planes = skew_planes(sys, llt);
    std::vector<std::complex<double>> mu;
    mu.reserve(2 * planes.size());
    for (const auto& p : planes) {
        mu.emplace_back(0.0, p.omega);
        mu.emplace_back(0.0, -p.omega);
    }
    return cluster_frequencies(mu, kClusterTol);
}

std::vector<ModePair> modal_basis(const SystemMatrices& sys) {
    const int n = sys.n();
    const GramMatrix gram = build_gram(sys);
    auto llt = cholesky_or_throw(gram.G, "G");
    const auto planes = skew_planes(sys, llt);
    if (static_cast<int>(planes.size()) != n) {
        throw ConvergenceFailure("expected n invariant 2-planes");
    }

    std::vector<std::complex<double>> mu;
    mu.reserve(2 * planes.size());
    for (const auto& p : planes) {
        mu.emplace_back(0.0, p.omega);
        mu.emplace_back(0.0, -p.omega);
    }
    const SpectralClusters clusters = cluster_frequencies(mu, kClusterTol);

    std::vector<ModePair> pairs;
    pairs.reserve(n);
    for (const auto& plane : planes) {
        int nearest = 0;
        double best = std::abs(plane.omega - clusters.lambdas[0]);
        for (int a = 1; a < clusters.count(); ++a) {
            const double d = std::abs(plane.omega - clusters.lambdas[a]);
            if (d < best) {
                best = d;
                nearest = a;
            }
        }
        const double lambda = clusters.lambdas[nearest];

        // Back to the original frame; the clustered frequency is shared by
        // every pair of the cluster.
        Eigen::VectorXd u = llt.matrixU().solve(plane.u);
        u /= g_norm(gram, u);

        // The partner is stored in its exact block-structured form
        // (x, lambda y) / (y, -lambda x); the Schur vector fixes y.
        ModePair pair;
        pair.omega = lambda;
        pair.u = u;
        pair.v.resize(2 * n);
        pair.v.head(n) = u.tail(n) / lambda;
        pair.v.tail(n) = -lambda * u.head(n);
        pairs.push_back(std::move(pair));
    }

    for (auto& p : pairs) apply_gauge(p);
    std::stable_sort(pairs.begin(), pairs.end(), [](const ModePair& x, const ModePair& y) {
        if (x.omega != y.omega) return x.omega < y.omega;
        return lexicographic_less(x.u, y.u);
    });
    return pairs;
}

}  // namespace gyromodal
