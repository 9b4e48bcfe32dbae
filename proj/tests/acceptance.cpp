// Acceptance suite: one pass/fail line per criterion, exit code equal to
// the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "gyromodal/complexmode.hpp"
#include "gyromodal/io.hpp"
#include "gyromodal/spectral.hpp"
#include "gyromodal/system.hpp"
#include "gyromodal/trajectory.hpp"
#include "gyromodal/verify.hpp"

using namespace gyromodal;
using cd = std::complex<double>;

namespace {

namespace fs = std::filesystem;

struct Criterion {
    bool pass = false;
    std::string detail;
};

double spectral_norm(const Eigen::MatrixXd& X) {
    return X.jacobiSvd().singularValues()(0);
}

std::string sci(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << v;
    return os.str();
}

SystemMatrices fixture_1dof() {
    Eigen::MatrixXd A(1, 1), B(1, 1), C(1, 1);
    A << 1.0;
    B << 0.0;
    C << 4.0;
    return validate_system(A, B, C);
}

SystemMatrices fixture_2dof_gyro() {
    Eigen::MatrixXd B(2, 2);
    B << 0.0, 1.5, -1.5, 0.0;
    return validate_system(Eigen::MatrixXd::Identity(2, 2), B,
                           Eigen::MatrixXd::Identity(2, 2));
}

// The shared acceptance ensemble: 100 seeded systems, n cycling over 1..8.
// Condition numbers and gyroscopic magnitude are kept small so that the
// frequency spread stays within the truncation budget of the fixed-step
// reference integrator (criterion 6 pins its step to min period / 200).
const std::vector<SystemMatrices>& acceptance_ensemble(double b_scale) {
    static const auto build = [](double bs) {
        std::vector<SystemMatrices> systems;
        systems.reserve(100);
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const int n = static_cast<int>((seed - 1) % 8) + 1;
            systems.push_back(random_system(RandomSystemSpec{n, seed, 3.0, bs}));
        }
        return systems;
    };
    static const std::vector<SystemMatrices> gyroscopic = build(0.25);
    static const std::vector<SystemMatrices> classical = build(0.0);
    return b_scale == 0.0 ? classical : gyroscopic;
}

StateVector seeded_unit_ic(const SystemMatrices& sys, std::uint64_t index) {
    std::mt19937_64 rng(index * 977 + 13);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd raw(2 * sys.n());
    for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = gauss(rng);
    raw /= raw.norm();
    return StateVector::from_stacked(raw);
}

// ---------------------------------------------------------------------------

Criterion golden_1dof() {
    const auto start = std::chrono::steady_clock::now();
    const auto sys = fixture_1dof();
    const auto basis = modal_basis(sys);
    if (basis.size() != 1) return {false, "expected one mode"};

    const double omega_err = std::abs(basis[0].omega - 2.0);
    const double basis_err =
        std::max((basis[0].u - Eigen::Vector2d(1, 0)).cwiseAbs().maxCoeff(),
                 (basis[0].v - Eigen::Vector2d(0, -2)).cwiseAbs().maxCoeff());

    const auto gram = build_gram(sys);
    const auto shapes = mode_shapes(basis);
    Eigen::VectorXd eta(1), etadot(1);
    eta << 1.0;
    etadot << 0.0;
    const auto params = project_initial_conditions(gram, basis, {eta, etadot});
    double traj_err = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = 10.0 * i / 1000.0;
        const auto st = evaluate_state(shapes, params, t);
        traj_err = std::max(traj_err, std::abs(st.eta(0) - std::cos(2.0 * t)));
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const bool pass =
        omega_err <= 1e-12 && basis_err <= 1e-12 && traj_err <= 1e-10 && seconds < 1.0;
    return {pass, "omega err " + sci(omega_err) + ", basis err " + sci(basis_err) +
                      ", traj err " + sci(traj_err) + ", " + sci(seconds) + " s"};
}

Criterion golden_2dof() {
    const auto start = std::chrono::steady_clock::now();
    const auto sys = fixture_2dof_gyro();
    const auto basis = modal_basis(sys);
    if (basis.size() != 2) return {false, "expected two modes"};

    // Independent oracle: positive roots of w^4 - 4.25 w^2 + 1 = 0.
    const double s = 4.25;
    const double disc = std::sqrt(s * s - 4.0);
    const double w_low = std::sqrt((s - disc) / 2.0);
    const double w_high = std::sqrt((s + disc) / 2.0);
    const double freq_err = std::max(std::abs(basis[0].omega - w_low),
                                     std::abs(basis[1].omega - w_high));

    const auto modes = complex_basis(sys);
    Eigen::VectorXcd low(2), high(2);
    low << cd(0, 1), cd(1, 0);
    high << cd(0, -1), cd(1, 0);
    const double coll_low =
        std::abs(std::abs(modes[0].z.dot(low)) - modes[0].z.norm() * low.norm());
    const double coll_high =
        std::abs(std::abs(modes[1].z.dot(high)) - modes[1].z.norm() * high.norm());
    const double mode_err = std::max(coll_low, coll_high);

    bool none_classical = true;
    for (const auto& m : modes) none_classical = none_classical && !is_classical_mode(sys, m);

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass =
        freq_err <= 1e-10 && mode_err <= 1e-10 && none_classical && seconds < 1.0;
    return {pass, "freq err " + sci(freq_err) + ", mode collinearity err " + sci(mode_err) +
                      ", classical " + (none_classical ? "none" : "SOME") + ", " +
                      sci(seconds) + " s"};
}

Criterion modal_basis_ensemble() {
    const auto start = std::chrono::steady_clock::now();
    double worst_gram = 0.0;
    double worst_pair = 0.0;
    for (const auto& sys : acceptance_ensemble(1.0)) {
        const auto basis = modal_basis(sys);
        const auto gram = build_gram(sys);
        const auto M = build_evolution_operator(sys).M;
        worst_gram = std::max(worst_gram, max_gram_deviation(gram, basis));

        const double mnorm = spectral_norm(M);
        for (const auto& p : basis) {
            worst_pair = std::max(worst_pair, (M * p.u - p.omega * p.v).norm() / mnorm);
            worst_pair = std::max(worst_pair, (M * p.v + p.omega * p.u).norm() / mnorm);
        }
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = worst_gram <= 1e-9 && worst_pair <= 1e-9 && seconds < 30.0;
    return {pass, "gram dev " + sci(worst_gram) + ", pair residual " + sci(worst_pair) + ", " +
                      sci(seconds) + " s"};
}

Criterion kernel_decomposition_ensemble() {
    double worst_residual = 0.0;
    std::size_t index = 0;
    for (const auto& sys : acceptance_ensemble(1.0)) {
        ++index;
        Eigen::EigenSolver<Eigen::MatrixXd> es(build_evolution_operator(sys).M, false);
        std::vector<cd> mu(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
        const auto clusters = cluster_frequencies(mu);

        int total = 0;
        for (int a = 0; a < clusters.count(); ++a) {
            // Null-space dimension must equal half the M^2-eigenspace size;
            // kernel_basis throws when it does not.
            Eigen::MatrixXcd basis;
            try {
                basis = kernel_basis(sys, clusters.lambdas[a], clusters.multiplicities[a]);
            } catch (const KernelDimensionMismatch& e) {
                return {false, "system " + std::to_string(index) + ": " + e.what()};
            }
            total += static_cast<int>(basis.cols());

            const double w = clusters.lambdas[a];
            const Eigen::MatrixXcd Q = sys.C.cast<cd>() - cd(0, w) * sys.B.cast<cd>() -
                                       w * w * sys.A.cast<cd>();
            const double scale = spectral_norm(sys.C) + w * spectral_norm(sys.B) +
                                 w * w * spectral_norm(sys.A);
            for (Eigen::Index j = 0; j < basis.cols(); ++j) {
                worst_residual = std::max(
                    worst_residual, (Q * basis.col(j)).norm() / (scale * basis.col(j).norm()));
            }
        }
        if (total != sys.n()) {
            return {false, "system " + std::to_string(index) + ": kernel dims sum to " +
                               std::to_string(total) + " instead of " +
                               std::to_string(sys.n())};
        }
    }
    const bool pass = worst_residual <= 1e-9;
    return {pass, "kernel residual " + sci(worst_residual)};
}

Criterion correspondence_ensemble() {
    double worst_roundtrip = 0.0;
    double worst_real_gram = 0.0;
    double worst_sesq_gram = 0.0;
    for (const auto& sys : acceptance_ensemble(1.0)) {
        const auto gram = build_gram(sys);
        const auto basis = modal_basis(sys);
        const auto family = kernel_family(sys);
        const auto modes = complex_basis(sys);

        for (const auto& p : basis) {
            const auto back = complex_to_real(sys, real_to_complex(p));
            worst_roundtrip =
                std::max(worst_roundtrip, (back.u - p.u).cwiseAbs().maxCoeff());
            worst_roundtrip =
                std::max(worst_roundtrip, (back.v - p.v).cwiseAbs().maxCoeff());
        }

        std::vector<ModePair> mapped;
        mapped.reserve(modes.size());
        for (const auto& m : modes) mapped.push_back(complex_to_real(sys, m));
        worst_real_gram = std::max(worst_real_gram, max_gram_deviation(gram, mapped));

        std::vector<Eigen::VectorXcd> images;
        images.reserve(basis.size());
        for (const auto& p : basis) images.push_back(real_to_complex(p).z);
        for (std::size_t i = 0; i < images.size(); ++i) {
            for (std::size_t j = 0; j < images.size(); ++j) {
                const cd prod = glued_sesq_inner(sys, family, images[i], images[j]);
                worst_sesq_gram = std::max(
                    worst_sesq_gram, std::abs(prod - (i == j ? cd(1.0) : cd(0.0))));
            }
        }
    }
    const bool pass =
        worst_roundtrip <= 1e-10 && worst_real_gram <= 1e-9 && worst_sesq_gram <= 1e-9;
    return {pass, "roundtrip " + sci(worst_roundtrip) + ", mapped gram dev " +
                      sci(worst_real_gram) + ", mapped sesq dev " + sci(worst_sesq_gram)};
}

Criterion oracle_ensemble() {
    double worst = 0.0;
    std::size_t worst_index = 0;
    std::size_t index = 0;
    for (const auto& sys : acceptance_ensemble(1.0)) {
        ++index;
        const auto gram = build_gram(sys);
        const auto basis = modal_basis(sys);
        const auto shapes = mode_shapes(basis);
        const auto ic = seeded_unit_ic(sys, index);
        const auto params = project_initial_conditions(gram, basis, ic);

        const double t_end = 20.0 / basis.front().omega;
        const double dt = default_reference_dt(basis.back().omega);
        const auto ref = integrate_reference(sys, ic, t_end, dt);
        for (std::size_t i = 0; i < ref.times.size(); ++i) {
            const auto st = evaluate_state(shapes, params, ref.times[i]);
            const double dev =
                std::max((st.eta - ref.states[i].eta).cwiseAbs().maxCoeff(),
                         (st.etadot - ref.states[i].etadot).cwiseAbs().maxCoeff());
            if (dev > worst) {
                worst = dev;
                worst_index = index;
            }
        }
    }
    const bool pass = worst <= 1e-6;
    return {pass, "max modal/rk4 discrepancy " + sci(worst) + " (system " +
                      std::to_string(worst_index) + ")"};
}

Criterion conservation_ensemble() {
    double worst_energy = 0.0;
    double worst_gnorm = 0.0;
    std::size_t index = 0;
    for (const auto& sys : acceptance_ensemble(1.0)) {
        ++index;
        const auto gram = build_gram(sys);
        const auto basis = modal_basis(sys);
        const auto shapes = mode_shapes(basis);
        const auto ic = seeded_unit_ic(sys, index);
        const auto params = project_initial_conditions(gram, basis, ic);

        const double e0 = energy(sys, ic);
        const double g0 = g_inner(gram, ic.stacked(), ic.stacked());
        const double t_end = 20.0 / basis.front().omega;
        for (int i = 1; i <= 50; ++i) {
            const auto st = evaluate_state(shapes, params, t_end * i / 50.0);
            worst_energy = std::max(worst_energy, std::abs(energy(sys, st) - e0) / e0);
            const Eigen::VectorXd y = st.stacked();
            worst_gnorm = std::max(worst_gnorm, std::abs(g_inner(gram, y, y) - g0) / g0);
        }
    }
    const bool pass = worst_energy <= 1e-9 && worst_gnorm <= 1e-9;
    return {pass,
            "energy drift " + sci(worst_energy) + ", G-norm drift " + sci(worst_gnorm)};
}

Criterion classical_reduction_ensemble() {
    double worst = 0.0;
    bool all_classical = true;
    for (const auto& sys : acceptance_ensemble(0.0)) {
        const auto basis = modal_basis(sys);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sys.C, sys.A);
        for (std::size_t k = 0; k < basis.size(); ++k) {
            const double expected =
                std::sqrt(ges.eigenvalues()(static_cast<Eigen::Index>(k)));
            worst = std::max(worst, std::abs(basis[k].omega - expected) / expected);
        }
        for (const auto& m : complex_basis(sys)) {
            all_classical = all_classical && is_classical_mode(sys, m);
        }
    }
    const bool pass = worst <= 1e-10 && all_classical;
    return {pass, "freq err vs (C, A) pencil " + sci(worst) + ", classical " +
                      (all_classical ? "all" : "NOT ALL")};
}

Criterion linearization_accuracy() {
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        std::mt19937_64 rng(seed * 31);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const int n = 2 + static_cast<int>(seed % 3);
        Eigen::MatrixXd R(n, n), S(n, n), Gb(n, n), W(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                R(i, j) = gauss(rng);
                S(i, j) = gauss(rng);
                Gb(i, j) = gauss(rng);
                W(i, j) = gauss(rng);
            }
        const Eigen::MatrixXd A = R.transpose() * R + Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd C = S.transpose() * S + Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd JQ = 0.5 * (W - W.transpose());
        const Eigen::MatrixXd B_expected = (Gb - Gb.transpose()) - JQ;

        LagrangianModel model;
        model.n = n;
        model.L0 = [C](const Eigen::VectorXd& x) { return -0.5 * x.dot(C * x); };
        model.b = [Gb](const Eigen::VectorXd& x) { return (Gb * x).eval(); };
        model.a = [A](const Eigen::VectorXd&) { return A; };
        model.Q = [JQ](const Eigen::VectorXd&, const Eigen::VectorXd& v) {
            return (JQ * v).eval();
        };
        const auto sys =
            linearize_at_equilibrium(model, {Eigen::VectorXd::Zero(n)});
        worst = std::max(worst, (sys.A - A).norm() / A.norm());
        worst = std::max(worst, (sys.B - B_expected).norm() / B_expected.norm());
        worst = std::max(worst, (sys.C - C).norm() / C.norm());
    }
    const bool pass = worst <= 1e-8;
    return {pass, "max relative matrix error " + sci(worst)};
}

// -- criterion 10: command-line determinism and the exit-code map ------------

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path cli_dir() {
    const auto dir = fs::temp_directory_path() / "gyromodal_acceptance";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path put(const std::string& name, const std::string& content) {
    const auto path = cli_dir() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

CliRun cli(const std::string& args) {
    const auto out_path = cli_dir() / "out.txt";
    const auto err_path = cli_dir() / "err.txt";
    const std::string cmd = std::string(GYROMODAL_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    return CliRun{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out_path),
                  slurp(err_path)};
}

Criterion cli_determinism_and_exit_codes() {
    const auto gyro = put("gyro.json", R"({
      "n": 2, "A": [[1,0],[0,1]], "B": [[0,1.5],[-1.5,0]], "C": [[1,0],[0,1]]
    })");
    const auto osc = put("osc.json", R"({"n": 1, "A": [[1]], "B": [[0]], "C": [[4]]})");
    const auto ic1 = put("ic1.json", R"({"eta0": [1], "etadot0": [0]})");
    const auto ic2 = put("ic2.json", R"({"eta0": [1, 0], "etadot0": [0, 0]})");

    std::vector<std::string> problems;

    // Byte-identical reruns of modes and simulate on every fixture.
    const std::vector<std::string> deterministic = {
        "modes --input " + gyro.string(),
        "modes --input " + osc.string(),
        "modes --input " + gyro.string() + " --format csv",
        "simulate --input " + osc.string() + " --ic " + ic1.string() +
            " --t1 5 --dt 0.01 --method modal",
        "simulate --input " + gyro.string() + " --ic " + ic2.string() +
            " --t1 10 --dt 0.01 --method both",
    };
    for (const auto& args : deterministic) {
        const auto first = cli(args);
        const auto second = cli(args);
        if (first.out != second.out || first.code != second.code) {
            problems.push_back("non-deterministic: " + args);
        }
    }

    // Exit-code map: 0 ok, 1 verification failure, 2 bad input,
    // 4 oracle discrepancy, 64 usage.
    const auto symb = put("symb.json", R"({
      "n": 2, "A": [[1,0],[0,1]], "B": [[0,1],[1,0]], "C": [[1,0],[0,1]]
    })");
    const auto broken = put("broken.json", "{\"n\": 1,");
    struct Expectation {
        std::string args;
        int code;
    };
    const std::vector<Expectation> expectations = {
        {"modes --input " + gyro.string(), 0},
        {"verify --input " + gyro.string(), 0},
        {"verify --random n=6 --seed 11 --cond-cap 50 --tol-ortho 1e-15", 1},
        {"modes --input " + symb.string(), 2},
        {"modes --input " + broken.string(), 2},
        {"simulate --input " + gyro.string() + " --ic " + ic2.string() +
             " --t1 5 --dt 0.001 --method both --tol 1e-30",
         4},
        {"simulate --input " + osc.string() + " --ic " + ic1.string() +
             " --t0 2 --t1 1 --dt 0.1",
         64},
        {"bogus-subcommand", 64},
    };
    for (const auto& e : expectations) {
        const auto run = cli(e.args);
        if (run.code != e.code) {
            problems.push_back("exit " + std::to_string(run.code) + " != " +
                               std::to_string(e.code) + " for: " + e.args);
        }
    }

    if (!problems.empty()) {
        std::string detail = problems.front();
        if (problems.size() > 1) {
            detail += " (+" + std::to_string(problems.size() - 1) + " more)";
        }
        return {false, detail};
    }
    return {true, std::to_string(deterministic.size()) + " deterministic reruns, " +
                      std::to_string(expectations.size()) + " exit-code probes"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Criterion()>>> criteria = {
        {"golden-1dof-fixture", golden_1dof},
        {"golden-2dof-gyroscopic-fixture", golden_2dof},
        {"modal-basis-ensemble", modal_basis_ensemble},
        {"kernel-decomposition-ensemble", kernel_decomposition_ensemble},
        {"real-complex-correspondence", correspondence_ensemble},
        {"oracle-agreement", oracle_ensemble},
        {"conservation", conservation_ensemble},
        {"classical-reduction", classical_reduction_ensemble},
        {"linearization-accuracy", linearization_accuracy},
        {"cli-determinism-and-exit-codes", cli_determinism_and_exit_codes},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Criterion result;
        try {
            result = criteria[i].second();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        if (!result.pass) ++failures;
        std::printf("[%s] criterion %02zu %s: %s\n", result.pass ? "PASS" : "FAIL", i + 1,
                    criteria[i].first.c_str(), result.detail.c_str());
    }
    if (failures == 0) {
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    } else {
        std::printf("%d acceptance criteria FAILED\n", failures);
    }
    return failures;
}
