// Command-line front end: load a system file, emit its normal modes,
// synthesize trajectories, or run the verification suite.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gyromodal/complexmode.hpp"
#include "gyromodal/io.hpp"
#include "gyromodal/spectral.hpp"
#include "gyromodal/system.hpp"
#include "gyromodal/trajectory.hpp"
#include "gyromodal/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitDiscrepancy = 4;
constexpr int kExitUsage = 64;

struct ModesOptions {
    std::string input;
    std::string output;
    std::string format = "json";
};

struct SimulateOptions {
    std::string input;
    std::string ic_path;
    std::string output;
    std::string method = "modal";
    double t0 = 0.0;
    double t1 = 0.0;
    double dt = 0.0;
    double tol = 1e-6;
};

struct VerifyOptions {
    std::string input;
    std::string random_spec;
    std::string output;
    std::uint64_t seed = 0;
    double b_scale = 1.0;
    double cond_cap = 1e4;
    gyromodal::TolProfile tol;
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw gyromodal::ParseError("cannot open output file: " + path);
    out << text;
}

std::vector<gyromodal::ModeRecord> compute_mode_records(const gyromodal::SystemMatrices& sys) {
    const auto basis = gyromodal::modal_basis(sys);
    const auto shapes = gyromodal::mode_shapes(basis);
    std::vector<gyromodal::ModeRecord> records;
    records.reserve(shapes.size());
    for (const auto& shape : shapes) {
        gyromodal::ComplexMode mode;
        mode.omega = shape.omega;
        mode.z = shape.h.cast<std::complex<double>>() +
                 std::complex<double>(0.0, 1.0) * shape.r.cast<std::complex<double>>();
        records.push_back(gyromodal::ModeRecord{
            shape.omega, shape.h, shape.r, gyromodal::is_classical_mode(sys, mode)});
    }
    return records;
}

int run_modes(const ModesOptions& opt) {
    const auto file = gyromodal::load_system_file(opt.input);
    const auto records = compute_mode_records(file.sys);
    write_text(opt.output,
               opt.format == "csv" ? gyromodal::modes_to_csv(records)
                                   : gyromodal::modes_to_json(records));
    return kExitOk;
}

int run_simulate(const SimulateOptions& opt) {
    const auto file = gyromodal::load_system_file(opt.input);
    const auto& sys = file.sys;
    const gyromodal::StateVector ic = gyromodal::load_initial_conditions(opt.ic_path, sys.n());

    const long steps = static_cast<long>(std::floor((opt.t1 - opt.t0) / opt.dt + 1e-9));
    std::vector<double> times;
    times.reserve(steps + 1);
    for (long i = 0; i <= steps; ++i) times.push_back(opt.t0 + static_cast<double>(i) * opt.dt);

    std::vector<gyromodal::StateVector> modal_states;
    std::vector<gyromodal::StateVector> rk4_states;
    if (opt.method == "modal" || opt.method == "both") {
        const auto basis = gyromodal::modal_basis(sys);
        const auto gram = gyromodal::build_gram(sys);
        const auto shapes = gyromodal::mode_shapes(basis);
        const auto params = gyromodal::project_initial_conditions(gram, basis, ic);
        modal_states.reserve(times.size());
        for (long i = 0; i <= steps; ++i) {
            modal_states.push_back(
                gyromodal::evaluate_state(shapes, params, static_cast<double>(i) * opt.dt));
        }
    }
    if (opt.method == "rk4" || opt.method == "both") {
        const auto result =
            gyromodal::integrate_reference(sys, ic, opt.t1 - opt.t0, opt.dt);
        rk4_states = result.states;
        rk4_states.resize(times.size(), rk4_states.empty() ? ic : rk4_states.back());
    }

    const auto& primary = opt.method == "rk4" ? rk4_states : modal_states;
    std::vector<double> energies;
    energies.reserve(primary.size());
    for (const auto& st : primary) energies.push_back(gyromodal::energy(sys, st));

    const bool both = opt.method == "both";
    std::ostringstream body;
    gyromodal::write_trajectory_csv(body, times, primary, energies,
                                    both ? &rk4_states : nullptr);
    write_text(opt.output, body.str());

    if (both) {
        double discrepancy = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            discrepancy = std::max(
                discrepancy,
                std::max((modal_states[i].eta - rk4_states[i].eta).cwiseAbs().maxCoeff(),
                         (modal_states[i].etadot - rk4_states[i].etadot).cwiseAbs().maxCoeff()));
        }
        std::cerr << "# max_discrepancy=" << gyromodal::format_g17(discrepancy) << "\n";
        if (discrepancy > opt.tol) return kExitDiscrepancy;
    }
    return kExitOk;
}

int run_verify(const VerifyOptions& opt) {
    gyromodal::SystemMatrices sys;
    if (!opt.random_spec.empty()) {
        if (opt.random_spec.rfind("n=", 0) != 0) {
            std::cerr << "gyromodal: --random expects n=<dof>\n";
            return kExitUsage;
        }
        int n = 0;
        try {
            n = std::stoi(opt.random_spec.substr(2));
        } catch (const std::exception&) {
            std::cerr << "gyromodal: --random expects n=<dof>\n";
            return kExitUsage;
        }
        if (n < 1) {
            std::cerr << "gyromodal: --random needs n >= 1\n";
            return kExitUsage;
        }
        sys = gyromodal::random_system(
            gyromodal::RandomSystemSpec{n, opt.seed, opt.cond_cap, opt.b_scale});
    } else {
        sys = gyromodal::load_system_file(opt.input).sys;
    }

    const auto report = gyromodal::run_invariant_suite(sys, opt.tol);
    std::printf("%-34s %-14s %-14s %s\n", "check", "measured", "bound", "result");
    for (const auto& c : report.checks) {
        std::printf("%-34s %-14.4e %-14.4e %s\n", c.name.c_str(), c.measured, c.bound,
                    c.pass ? "PASS" : "FAIL");
    }
    if (!opt.output.empty()) {
        write_text(opt.output, gyromodal::report_to_json(report));
    }
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

void add_tol_flags(CLI::App* cmd, gyromodal::TolProfile& tol) {
    cmd->add_option("--tol-ortho", tol.ortho, "Modal orthonormality bound");
    cmd->add_option("--tol-pair", tol.pair, "Pair-relation residual bound");
    cmd->add_option("--tol-kernel", tol.kernel, "Kernel residual bound");
    cmd->add_option("--tol-corresp", tol.corresp, "Real/complex correspondence bound");
    cmd->add_option("--tol-roundtrip", tol.roundtrip, "Round-trip reproduction bound");
    cmd->add_option("--tol-eigen", tol.eigen, "Frequency consistency bound");
    cmd->add_option("--tol-gram", tol.gram, "Gram route agreement bound");
    cmd->add_option("--tol-antisym", tol.antisym, "Operator antisymmetry bound");
    cmd->add_option("--tol-recon", tol.recon, "IC reconstruction bound");
    cmd->add_option("--tol-ode", tol.ode, "Motion-equation residual bound");
    cmd->add_option("--tol-conserve", tol.conserve, "Conservation drift bound");
    cmd->add_option("--tol-agree", tol.agree, "Formulation agreement bound");
    cmd->add_option("--tol-oracle", tol.oracle, "Integrator agreement bound");
    cmd->add_option("--tol-classical", tol.classical, "Classical-mode detection bound");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gyromodal: normal modes and exact trajectories of linearized "
                 "non-dissipative Lagrangian systems with gyroscopic forces"};
    app.require_subcommand(1);

    ModesOptions modes_opt;
    auto* modes = app.add_subcommand("modes", "Compute the modal basis of a system file");
    modes->add_option("--input", modes_opt.input, "System JSON file")->required();
    modes->add_option("--output", modes_opt.output, "Output path (default: stdout)");
    modes->add_option("--format", modes_opt.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));

    SimulateOptions sim_opt;
    auto* sim = app.add_subcommand("simulate", "Synthesize a trajectory");
    sim->add_option("--input", sim_opt.input, "System JSON file")->required();
    sim->add_option("--ic", sim_opt.ic_path, "Initial-condition JSON file")->required();
    sim->add_option("--t0", sim_opt.t0, "Start time");
    sim->add_option("--t1", sim_opt.t1, "End time")->required();
    sim->add_option("--dt", sim_opt.dt, "Output (and RK4) step")->required();
    sim->add_option("--method", sim_opt.method, "Trajectory source")
        ->check(CLI::IsMember({"modal", "rk4", "both"}));
    sim->add_option("--output", sim_opt.output, "Output CSV path (default: stdout)");
    sim->add_option("--tol", sim_opt.tol, "Max allowed modal/RK4 discrepancy with --method both");

    VerifyOptions ver_opt;
    if (const char* env = std::getenv("GYROMODAL_TOL_PROFILE")) {
        try {
            gyromodal::apply_tol_overrides(ver_opt.tol, env);
        } catch (const std::exception& e) {
            std::cerr << "gyromodal: GYROMODAL_TOL_PROFILE: " << e.what() << "\n";
            return kExitUsage;
        }
    }
    auto* ver = app.add_subcommand("verify", "Run the invariant suite against a system");
    auto* ver_input = ver->add_option("--input", ver_opt.input, "System JSON file");
    auto* ver_random =
        ver->add_option("--random", ver_opt.random_spec, "Generate a random system, n=<dof>");
    ver_input->excludes(ver_random);
    ver->add_option("--seed", ver_opt.seed, "Seed for --random");
    ver->add_option("--b-scale", ver_opt.b_scale, "Gyroscopic magnitude for --random");
    ver->add_option("--cond-cap", ver_opt.cond_cap, "Condition-number cap for --random");
    ver->add_option("--output", ver_opt.output, "Write the report as JSON");
    add_tol_flags(ver, ver_opt.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(modes)) return run_modes(modes_opt);
        if (app.got_subcommand(sim)) {
            if (!(sim_opt.t1 > sim_opt.t0) || !(sim_opt.dt > 0.0)) {
                std::cerr << "gyromodal: simulate requires t1 > t0 and dt > 0\n";
                return kExitUsage;
            }
            return run_simulate(sim_opt);
        }
        if (app.got_subcommand(ver)) {
            if (ver_opt.input.empty() && ver_opt.random_spec.empty()) {
                std::cerr << "gyromodal: verify needs --input or --random\n";
                return kExitUsage;
            }
            return run_verify(ver_opt);
        }
    } catch (const gyromodal::Error& e) {
        std::cerr << "gyromodal: " << e.what() << "\n";
        return gyromodal::cli_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "gyromodal: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitUsage;
}
