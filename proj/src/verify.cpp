#include "gyromodal/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "gyromodal/complexmode.hpp"
#include "gyromodal/system.hpp"
#include "gyromodal/trajectory.hpp"

namespace gyromodal {

namespace {

using Complexd = std::complex<double>;

Eigen::VectorXd rk4_step(const Eigen::MatrixXd& M, const Eigen::VectorXd& y, double dt) {
    const Eigen::VectorXd k1 = M * y;
    const Eigen::VectorXd k2 = M * (y + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = M * (y + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = M * (y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Eigen::VectorXd rk4_final_state(const Eigen::MatrixXd& M,
                                Eigen::VectorXd y,
                                long steps,
                                double dt) {
    for (long i = 0; i < steps; ++i) y = rk4_step(M, y, dt);
    return y;
}

double spectral_norm(const Eigen::MatrixXd& X) {
    return X.jacobiSvd().singularValues()(0);
}

Eigen::MatrixXd random_gaussian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd X(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) X(i, j) = gauss(rng);
    return X;
}

// Gram (Wishart) matrix with its condition number capped by a ridge shift.
Eigen::MatrixXd capped_wishart(const Eigen::MatrixXd& R, double cap) {
    Eigen::MatrixXd W = R.transpose() * R;
    W = 0.5 * (W + W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W, Eigen::EigenvaluesOnly);
    const double lmax = es.eigenvalues().maxCoeff();
    const double lmin = es.eigenvalues().minCoeff();
    double shift = 0.0;
    if (lmax > cap * lmin) shift = (lmax - cap * lmin) / (cap - 1.0);
    if (lmax <= 0.0) return Eigen::MatrixXd::Identity(R.rows(), R.cols());
    return W + shift * Eigen::MatrixXd::Identity(R.rows(), R.cols());
}

struct SuiteContext {
    const SystemMatrices& sys;
    EvolutionOperator evo;
    GramMatrix gram;
    std::vector<ModePair> basis;
    std::vector<ModeShape> shapes;
    KernelFamily family;
    std::vector<ComplexMode> cbasis;
    SpectralClusters clusters;
    Eigen::VectorXcd spectrum;
};

void add_check(InvariantReport& report, const std::string& name, double measured, double bound,
               bool pass) {
    report.checks.push_back(CheckResult{name, measured, bound, pass});
}

void add_upper_bound_check(InvariantReport& report, const std::string& name, double measured,
                           double bound) {
    add_check(report, name, measured, bound, measured <= bound);
}

}  // namespace

IntegrationResult integrate_reference(const SystemMatrices& sys,
                                      const StateVector& ic,
                                      double t_end,
                                      double dt) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw DimensionMismatch("integrate_reference requires dt > 0 and t_end > 0");
    }
    if (ic.eta.size() != sys.n() || ic.etadot.size() != sys.n()) {
        throw DimensionMismatch("initial condition size does not match the system");
    }
    const Eigen::MatrixXd M = build_evolution_operator(sys).M;
    const long steps = static_cast<long>(std::floor(t_end / dt + 1e-9));

    IntegrationResult result;
    result.times.reserve(steps + 1);
    result.states.reserve(steps + 1);
    Eigen::VectorXd y = ic.stacked();
    result.times.push_back(0.0);
    result.states.push_back(StateVector::from_stacked(y));
    for (long i = 1; i <= steps; ++i) {
        y = rk4_step(M, y, dt);
        if (!y.allFinite()) {
            throw NonFinite("state overflowed during reference integration");
        }
        result.times.push_back(static_cast<double>(i) * dt);
        result.states.push_back(StateVector::from_stacked(y));
    }

    // Richardson estimate of the global error at the final time.
    if (steps > 0) {
        const Eigen::VectorXd y_half = rk4_final_state(M, ic.stacked(), 2 * steps, 0.5 * dt);
        result.max_step_error_estimate =
            (y - y_half).cwiseAbs().maxCoeff() * (16.0 / 15.0);
    }
    return result;
}

double default_reference_dt(double omega_max) {
    return (2.0 * std::numbers::pi / omega_max) / 200.0;
}

SystemMatrices random_system(const RandomSystemSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const Eigen::MatrixXd R = random_gaussian(spec.n, rng);
    const Eigen::MatrixXd S = random_gaussian(spec.n, rng);
    const Eigen::MatrixXd T = random_gaussian(spec.n, rng);

    const Eigen::MatrixXd A = capped_wishart(R, spec.condition_cap);
    const Eigen::MatrixXd C = capped_wishart(S, spec.condition_cap);

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(spec.n, spec.n);
    if (spec.b_scale != 0.0 && spec.n > 1) {
        Eigen::MatrixXd W = T - T.transpose();
        const double wnorm = spectral_norm(W);
        if (wnorm > 0.0) {
            B = spec.b_scale * std::sqrt(spectral_norm(A) * spectral_norm(C)) * W / wnorm;
        }
    }
    return validate_system(A, B, C, 1e-8);
}

double max_gram_deviation(const GramMatrix& gram, const std::vector<ModePair>& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double uu = g_inner(gram, basis[i].u, basis[j].u) - (i == j ? 1.0 : 0.0);
            const double vv = g_inner(gram, basis[i].v, basis[j].v) - (i == j ? 1.0 : 0.0);
            const double uv = g_inner(gram, basis[i].u, basis[j].v);
            worst = std::max({worst, std::abs(uu), std::abs(vv), std::abs(uv)});
        }
    }
    return worst;
}

double max_pair_residual(const Eigen::MatrixXd& M, const std::vector<ModePair>& basis) {
    const double mnorm = spectral_norm(M);
    double worst = 0.0;
    for (const auto& p : basis) {
        worst = std::max(worst, (M * p.u - p.omega * p.v).norm());
        worst = std::max(worst, (M * p.v + p.omega * p.u).norm());
    }
    return worst / mnorm;
}

InvariantReport run_invariant_suite(const SystemMatrices& sys, const TolProfile& tol) {
    InvariantReport report;
    const int n = sys.n();
    const int nn = 2 * n;

    SuiteContext ctx{sys,
                     build_evolution_operator(sys),
                     build_gram(sys),
                     modal_basis(sys),
                     {},
                     kernel_family(sys),
                     complex_basis(sys),
                     {},
                     {}};
    ctx.shapes = mode_shapes(ctx.basis);
    {
        Eigen::EigenSolver<Eigen::MatrixXd> es(ctx.evo.M, false);
        ctx.spectrum = es.eigenvalues();
        std::vector<Complexd> mu(ctx.spectrum.data(), ctx.spectrum.data() + ctx.spectrum.size());
        ctx.clusters = cluster_frequencies(mu, kClusterTol);
    }
    std::mt19937_64 rng(0x5eed2026u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto random_vec = [&](int size) {
        Eigen::VectorXd x(size);
        for (int i = 0; i < size; ++i) x(i) = gauss(rng);
        return x;
    };

    // -- structure of the validated triple --------------------------------
    {
        const double dev = std::max({(sys.A - sys.A.transpose()).cwiseAbs().maxCoeff(),
                                     (sys.C - sys.C.transpose()).cwiseAbs().maxCoeff(),
                                     (sys.B + sys.B.transpose()).cwiseAbs().maxCoeff()});
        add_upper_bound_check(report, "matrix-structure", dev, 0.0);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esA(sys.A, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esC(sys.C, Eigen::EigenvaluesOnly);
        const double minA = esA.eigenvalues().minCoeff() / esA.eigenvalues().maxCoeff();
        const double minC = esC.eigenvalues().minCoeff() / esC.eigenvalues().maxCoeff();
        const double measured = std::min(minA, minC);
        add_check(report, "definiteness-margin", measured, 1e-12, measured > 1e-12);
    }

    // -- Gram matrix: two construction routes agree ------------------------
    {
        const Eigen::MatrixXd K = build_pairing(sys).K;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(ctx.evo.M.transpose());
        const Eigen::MatrixXd KMinv = -lu.solve(K).transpose();
        const double rel = (ctx.gram.G - KMinv).norm() / ctx.gram.G.norm();
        add_upper_bound_check(report, "gram-two-routes", rel, tol.gram);
    }

    // -- randomized operator identities ------------------------------------
    {
        double worst_antisym = 0.0;
        double worst_square = -std::numeric_limits<double>::infinity();
        for (int trial = 0; trial < 200; ++trial) {
            const Eigen::VectorXd x = random_vec(nn);
            const Eigen::VectorXd y = random_vec(nn);
            const double sum = g_inner(ctx.gram, x, ctx.evo.M * y) +
                               g_inner(ctx.gram, y, ctx.evo.M * x);
            worst_antisym = std::max(
                worst_antisym, std::abs(sum) / (g_norm(ctx.gram, x) * g_norm(ctx.gram, y)));
            const Eigen::VectorXd Mx = ctx.evo.M * x;
            worst_square = std::max(worst_square, g_inner(ctx.gram, x, ctx.evo.M * Mx) /
                                                      g_inner(ctx.gram, x, x));
        }
        add_upper_bound_check(report, "evolution-antisymmetry", worst_antisym, tol.antisym);
        add_check(report, "evolution-square-negative", worst_square, 0.0, worst_square < 0.0);
    }

    // -- modal basis --------------------------------------------------------
    add_upper_bound_check(report, "modal-orthonormality",
                          max_gram_deviation(ctx.gram, ctx.basis), tol.ortho);
    add_upper_bound_check(report, "modal-pair-relations",
                          max_pair_residual(ctx.evo.M, ctx.basis), tol.pair);
    {
        std::vector<double> pos;
        for (Eigen::Index i = 0; i < ctx.spectrum.size(); ++i) {
            if (ctx.spectrum(i).imag() > 0.0) pos.push_back(ctx.spectrum(i).imag());
        }
        std::sort(pos.begin(), pos.end());
        double worst = 0.0;
        for (std::size_t k = 0; k < ctx.basis.size(); ++k) {
            worst = std::max(worst, std::abs(ctx.basis[k].omega - pos[k]) / pos[k]);
        }
        add_upper_bound_check(report, "frequency-spectrum-match", worst, tol.eigen);
    }

    // -- kernels and the complex formalism ---------------------------------
    {
        int total = 0;
        int worst_dim = 0;
        for (int a = 0; a < ctx.clusters.count(); ++a) {
            const auto dim = static_cast<int>(ctx.family.clusters[a].basis.cols());
            total += dim;
            worst_dim = std::max(worst_dim, std::abs(dim - ctx.clusters.multiplicities[a]));
        }
        worst_dim = std::max(worst_dim, std::abs(total - n));
        add_upper_bound_check(report, "kernel-dimensions", worst_dim, 0.0);
    }
    {
        double worst = 0.0;
        for (const auto& mode : ctx.cbasis) {
            const double w = mode.omega;
            const Eigen::MatrixXcd Q = sys.C.cast<Complexd>() -
                                       Complexd(0.0, w) * sys.B.cast<Complexd>() -
                                       w * w * sys.A.cast<Complexd>();
            const double scale = (sys.C.norm() + w * sys.B.norm() + w * w * sys.A.norm()) *
                                 mode.z.norm();
            worst = std::max(worst, (Q * mode.z).norm() / scale);
        }
        add_upper_bound_check(report, "kernel-residual", worst, tol.kernel);
    }
    {
        // Distinct kernels intersect trivially: C + la*lb*A stays definite.
        double margin = std::numeric_limits<double>::infinity();
        for (int a = 0; a < ctx.clusters.count(); ++a) {
            for (int b = a + 1; b < ctx.clusters.count(); ++b) {
                const Eigen::MatrixXd X =
                    sys.C + ctx.clusters.lambdas[a] * ctx.clusters.lambdas[b] * sys.A;
                const double smin = X.jacobiSvd().singularValues().minCoeff();
                margin = std::min(margin, smin / spectral_norm(X));
            }
        }
        const bool pass = ctx.clusters.count() < 2 || margin > 1e-12;
        add_check(report, "kernel-disjointness", margin, 1e-12, pass);
    }
    {
        // Projector algebra of the direct-sum decomposition.
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
        double worst = 0.0;
        for (const auto& cl : ctx.family.clusters) {
            sum += cl.projector;
            worst = std::max(worst,
                             (cl.projector * cl.projector - cl.projector).cwiseAbs().maxCoeff());
        }
        worst = std::max(worst,
                         (sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff());
        add_upper_bound_check(report, "kernel-projectors", worst, tol.corresp);
    }
    {
        // Glued product orthonormality of the complex basis.
        double worst = 0.0;
        for (std::size_t i = 0; i < ctx.cbasis.size(); ++i) {
            for (std::size_t j = 0; j < ctx.cbasis.size(); ++j) {
                const Complexd p =
                    glued_sesq_inner(sys, ctx.family, ctx.cbasis[i].z, ctx.cbasis[j].z);
                worst = std::max(worst, std::abs(p - (i == j ? Complexd(1.0) : Complexd(0.0))));
            }
        }
        add_upper_bound_check(report, "sesq-orthonormality", worst, tol.corresp);
    }
    {
        // Same-kernel split identities (transposed, unconjugated products).
        double worst = 0.0;
        for (const auto& cl : ctx.family.clusters) {
            const double l2 = cl.lambda * cl.lambda;
            const Eigen::MatrixXcd R =
                sys.C.cast<Complexd>() - l2 * sys.A.cast<Complexd>();
            const double r_scale = sys.C.norm() + l2 * sys.A.norm();
            const double b_scale = std::max(sys.B.norm(), 1e-300);
            for (Eigen::Index i = 0; i < cl.basis.cols(); ++i) {
                for (Eigen::Index j = 0; j < cl.basis.cols(); ++j) {
                    const Eigen::VectorXcd zi = cl.basis.col(i);
                    const Eigen::VectorXcd zj = cl.basis.col(j);
                    worst = std::max(worst,
                                     std::abs((zi.transpose() * (R * zj)).value()) /
                                         (r_scale * zi.norm() * zj.norm()));
                    worst = std::max(
                        worst,
                        std::abs((zi.transpose() * (sys.B.cast<Complexd>() * zj)).value()) /
                            (b_scale * zi.norm() * zj.norm()));
                }
            }
        }
        add_upper_bound_check(report, "kernel-split-identities", worst, tol.corresp);
    }

    // -- real <-> complex correspondence -----------------------------------
    {
        double worst = 0.0;
        for (const auto& p : ctx.basis) {
            const ComplexMode m = real_to_complex(p);
            const ModePair back = complex_to_real(sys, m);
            worst = std::max(worst, (back.u - p.u).cwiseAbs().maxCoeff());
            worst = std::max(worst, (back.v - p.v).cwiseAbs().maxCoeff());
        }
        add_upper_bound_check(report, "real-complex-roundtrip", worst, tol.roundtrip);
    }
    {
        // Sesq-normalized modes map to G-orthonormal pairs.
        std::vector<ModePair> mapped;
        mapped.reserve(ctx.cbasis.size());
        for (const auto& m : ctx.cbasis) mapped.push_back(complex_to_real(sys, m));
        add_upper_bound_check(report, "complex-to-real-orthonormality",
                              max_gram_deviation(ctx.gram, mapped), tol.corresp);

        // And G-orthonormal pairs map to glued-orthonormal modes.
        double worst = 0.0;
        std::vector<ComplexMode> images;
        images.reserve(ctx.basis.size());
        for (const auto& p : ctx.basis) images.push_back(real_to_complex(p));
        for (std::size_t i = 0; i < images.size(); ++i) {
            for (std::size_t j = 0; j < images.size(); ++j) {
                const Complexd p =
                    glued_sesq_inner(sys, ctx.family, images[i].z, images[j].z);
                worst = std::max(worst, std::abs(p - (i == j ? Complexd(1.0) : Complexd(0.0))));
            }
        }
        add_upper_bound_check(report, "real-to-complex-orthonormality", worst, tol.corresp);
    }
    {
        // The split map intertwines M with multiplication by -i lambda.
        double worst = 0.0;
        for (const auto& p : ctx.basis) {
            const Eigen::VectorXd mu = ctx.evo.M * p.u;
            const Eigen::VectorXcd psi_u =
                p.u.head(n).cast<Complexd>() + Complexd(0.0, 1.0) * p.v.head(n).cast<Complexd>();
            const Eigen::VectorXcd psi_mu =
                mu.head(n).cast<Complexd>() +
                Complexd(0.0, 1.0) * (mu.tail(n) / p.omega).cast<Complexd>();
            const Eigen::VectorXcd expected = Complexd(0.0, -p.omega) * psi_u;
            worst = std::max(worst, (psi_mu - expected).norm() / (p.omega * psi_u.norm()));
        }
        add_upper_bound_check(report, "split-map-intertwining", worst, tol.corresp);
    }

    // -- trajectories --------------------------------------------------------
    {
        Eigen::VectorXd raw = random_vec(nn);
        raw /= g_norm(ctx.gram, raw);
        const StateVector ic = StateVector::from_stacked(raw);
        const HarmonicParams params = project_initial_conditions(ctx.gram, ctx.basis, ic);

        const StateVector at0 = evaluate_state(ctx.shapes, params, 0.0);
        const double recon = std::max((at0.eta - ic.eta).cwiseAbs().maxCoeff(),
                                      (at0.etadot - ic.etadot).cwiseAbs().maxCoeff());
        add_upper_bound_check(report, "ic-reconstruction", recon, tol.recon);

        double omega_min = ctx.basis.front().omega;
        double omega_max = ctx.basis.back().omega;
        const double t_end = 20.0 / omega_min;
        std::uniform_real_distribution<double> tdist(0.0, t_end);

        double worst_ode = 0.0;
        double worst_energy = 0.0;
        double worst_gnorm = 0.0;
        double worst_complex = 0.0;
        double worst_sum = 0.0;
        const double e0 = energy(sys, ic);
        const double g0 = g_inner(ctx.gram, raw, raw);
        const auto harmonics = normal_harmonics(ctx.shapes, params);
        const ComplexAmplitudes amps = complex_amplitudes(params);
        for (int trial = 0; trial < 50; ++trial) {
            const double t = tdist(rng);
            const StateVector st = evaluate_state(ctx.shapes, params, t);
            const Eigen::VectorXd acc = evaluate_acceleration(ctx.shapes, params, t);

            const Eigen::VectorXd residual = sys.A * acc + sys.B * st.etadot + sys.C * st.eta;
            const double scale = (sys.A * acc).norm() + (sys.B * st.etadot).norm() +
                                 (sys.C * st.eta).norm();
            if (scale > 0.0) worst_ode = std::max(worst_ode, residual.norm() / scale);

            worst_energy = std::max(worst_energy, std::abs(energy(sys, st) - e0) / e0);
            const Eigen::VectorXd y = st.stacked();
            worst_gnorm = std::max(worst_gnorm, std::abs(g_inner(ctx.gram, y, y) - g0) / g0);

            Eigen::VectorXcd eta_c = Eigen::VectorXcd::Zero(n);
            Eigen::VectorXd eta_sum = Eigen::VectorXd::Zero(n);
            for (std::size_t k = 0; k < ctx.shapes.size(); ++k) {
                const Complexd rot =
                    std::exp(Complexd(0.0, -ctx.shapes[k].omega * t));
                const Eigen::VectorXcd z = ctx.shapes[k].h.cast<Complexd>() +
                                           Complexd(0.0, 1.0) *
                                               ctx.shapes[k].r.cast<Complexd>();
                eta_c += amps.gamma(static_cast<Eigen::Index>(k)) * rot * z;
                eta_sum += harmonics[k](t);
            }
            const double state_scale = 1.0 + st.eta.norm();
            worst_complex = std::max(
                worst_complex, (eta_c.real() - st.eta).cwiseAbs().maxCoeff() / state_scale);
            worst_sum =
                std::max(worst_sum, (eta_sum - st.eta).cwiseAbs().maxCoeff() / state_scale);
        }
        add_upper_bound_check(report, "motion-equation-residual", worst_ode, tol.ode);
        add_upper_bound_check(report, "energy-conservation", worst_energy, tol.conserve);
        add_upper_bound_check(report, "gram-norm-conservation", worst_gnorm, tol.conserve);
        add_upper_bound_check(report, "complex-form-agreement", worst_complex, tol.agree);
        add_upper_bound_check(report, "harmonics-sum", worst_sum, tol.agree);

        // Closed form against the reference integrator.
        const double dt = default_reference_dt(omega_max);
        const IntegrationResult ref = integrate_reference(sys, ic, t_end, dt);
        double worst_oracle = 0.0;
        for (std::size_t i = 0; i < ref.times.size(); ++i) {
            const StateVector st = evaluate_state(ctx.shapes, params, ref.times[i]);
            worst_oracle = std::max(
                worst_oracle,
                std::max((st.eta - ref.states[i].eta).cwiseAbs().maxCoeff(),
                         (st.etadot - ref.states[i].etadot).cwiseAbs().maxCoeff()));
        }
        const double rk_constant = std::pow(omega_max, 5) / 120.0;
        const double bound = std::max(tol.oracle, 10.0 * rk_constant * std::pow(dt, 4) * t_end);
        add_upper_bound_check(report, "oracle-agreement", worst_oracle, bound);
    }

    // -- classical reduction (meaningful only when B vanishes) ---------------
    if (sys.B.cwiseAbs().maxCoeff() == 0.0) {
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sys.C, sys.A);
        double worst = 0.0;
        bool all_classical = true;
        for (std::size_t k = 0; k < ctx.basis.size(); ++k) {
            const double expected = std::sqrt(ges.eigenvalues()(static_cast<Eigen::Index>(k)));
            worst = std::max(worst,
                             std::abs(ctx.basis[k].omega - expected) / expected);
            all_classical =
                all_classical && is_classical_mode(sys, ctx.cbasis[k], tol.classical);
        }
        add_check(report, "classical-reduction", worst, tol.eigen,
                  worst <= tol.eigen && all_classical);
    }

    return report;
}

}  // namespace gyromodal
