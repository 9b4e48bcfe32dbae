#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gyromodal/types.hpp"
#include "gyromodal/verify.hpp"

namespace gyromodal {

/// System description as stored on disk:
/// { "n": int, "A": [[..]], "B": [[..]], "C": [[..]] }, optional "q_star".
struct SystemFile {
    SystemMatrices sys;
    std::optional<Eigen::VectorXd> q_star;
};

/// One entry of a modes file.
struct ModeRecord {
    double omega = 0.0;
    Eigen::VectorXd h;
    Eigen::VectorXd r;
    bool classical = false;
};

/// Parse and validate a system file. Throws ParseError (with the parser's
/// line/column diagnostics) on malformed input; propagates validation
/// errors for bad matrices.
SystemFile load_system_file(const std::string& path, double tol = 1e-10);

/// Parse { "eta0": [..], "etadot0": [..] } with both vectors of length n.
StateVector load_initial_conditions(const std::string& path, int n);

/// Serialize modes as
/// { "frequencies": [..], "modes": [{ "omega", "h", "r", "classical" }..] }.
std::string modes_to_json(const std::vector<ModeRecord>& modes);

/// Flat CSV table: omega, classical, h_1..h_n, r_1..r_n.
std::string modes_to_csv(const std::vector<ModeRecord>& modes);

/// Reload a modes file written by modes_to_json.
std::vector<ModeRecord> load_modes_file(const std::string& path);

/// Write a trajectory table: t, eta_1..n, etadot_1..n, energy, and when
/// `reference` is present, rk4_eta_1..n, rk4_etadot_1..n. Values use
/// 17-significant-digit formatting.
void write_trajectory_csv(std::ostream& out,
                          const std::vector<double>& times,
                          const std::vector<StateVector>& states,
                          const std::vector<double>& energies,
                          const std::vector<StateVector>* reference = nullptr);

/// Invariant report as a JSON document.
std::string report_to_json(const InvariantReport& report);

/// 17-significant-digit decimal formatting (round-trips doubles exactly).
std::string format_g17(double value);

/// Exit code for an error raised while executing a command: 2 for input
/// validation failures, 3 for numerical failures.
int cli_exit_code(const std::exception& error);

/// Apply "key=value,key=value" overrides (the GYROMODAL_TOL_PROFILE
/// format) onto a tolerance profile. Throws ParseError on unknown keys or
/// malformed entries.
void apply_tol_overrides(TolProfile& profile, const std::string& overrides);

}  // namespace gyromodal
