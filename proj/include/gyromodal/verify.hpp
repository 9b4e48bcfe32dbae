#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gyromodal/spectral.hpp"
#include "gyromodal/types.hpp"

namespace gyromodal {

/// Output of the fixed-step reference integrator.
struct IntegrationResult {
    std::vector<double> times;        ///< uniform grid 0, dt, 2dt, ...
    std::vector<StateVector> states;  ///< one state per grid time
    double max_step_error_estimate = 0.0;  ///< Richardson estimate at t_end
};

/// Deterministic recipe for a random validated system.
struct RandomSystemSpec {
    int n = 2;
    std::uint64_t seed = 0;
    double condition_cap = 1e4;  ///< max allowed condition number for A, C
    double b_scale = 1.0;        ///< |B| relative to sqrt(|A| |C|)
};

/// Tolerances used by the invariant suite; defaults match the library's
/// documented bounds. Overridable via GYROMODAL_TOL_PROFILE and the CLI
/// --tol-* flags.
struct TolProfile {
    double ortho = 1e-9;       ///< modal Gram deviation from identity
    double pair = 1e-9;        ///< pair-relation residual, relative to |M|
    double kernel = 1e-9;      ///< kernel residual, relative scale
    double corresp = 1e-9;     ///< real<->complex orthonormality transfer
    double roundtrip = 1e-10;  ///< real->complex->real reproduction
    double eigen = 1e-10;      ///< omega vs spectrum of M
    double gram = 1e-10;       ///< two construction routes for G
    double antisym = 1e-9;     ///< randomized M-antisymmetry check
    double recon = 1e-9;       ///< initial-condition reconstruction
    double ode = 1e-9;         ///< closed-form residual in the motion equations
    double conserve = 1e-9;    ///< energy and G-norm relative drift
    double agree = 1e-12;      ///< complex form and harmonics-sum agreement
    double oracle = 1e-6;      ///< closed form vs reference integration
    double classical = 1e-8;   ///< classical-mode detection
};

/// One row of the invariant report. `pass` is the verdict; `measured` and
/// `bound` are printed so failures are diagnosable.
struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct InvariantReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Classic fixed-step RK4 on the first-order system y' = M y, on the grid
/// i*dt up to the largest multiple of dt not exceeding t_end. Throws
/// NonFinite if the state overflows.
IntegrationResult integrate_reference(const SystemMatrices& sys,
                                      const StateVector& ic,
                                      double t_end,
                                      double dt);

/// Reference step size: a 200th of the shortest modal period.
double default_reference_dt(double omega_max);

/// Seeded random validated system: A = R^T R + eps I and C = S^T S + eps I
/// with eps capping the condition number, B a scaled random antisymmetric
/// matrix. Same spec gives bitwise-identical output.
SystemMatrices random_system(const RandomSystemSpec& spec);

/// Max |Gram - I| over all pairwise scalar products of the basis vectors.
double max_gram_deviation(const GramMatrix& gram, const std::vector<ModePair>& basis);

/// Max of |M u - w v| and |M v + w u| over the basis, relative to |M|_2.
double max_pair_residual(const Eigen::MatrixXd& M, const std::vector<ModePair>& basis);

/// Run every module invariant against the system and collect the results.
/// Failures are data, not exceptions.
InvariantReport run_invariant_suite(const SystemMatrices& sys,
                                    const TolProfile& tol = TolProfile{});

}  // namespace gyromodal
