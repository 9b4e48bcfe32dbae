#include "gyromodal/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace gyromodal {

std::vector<ModeShape> mode_shapes(const std::vector<ModePair>& basis) {
    std::vector<ModeShape> shapes;
    shapes.reserve(basis.size());
    for (const auto& pair : basis) {
        const Eigen::Index n = pair.u.size() / 2;
        ModeShape shape;
        shape.omega = pair.omega;
        shape.h = pair.u.head(n);
        shape.l = pair.u.tail(n);
        shape.r = pair.v.head(n);
        shape.s = pair.v.tail(n);

        const double scale =
            0.5 * (pair.omega * (shape.h.norm() + shape.r.norm()) + shape.l.norm() +
                   shape.s.norm());
        const double res_l = (shape.l - pair.omega * shape.r).norm();
        const double res_s = (shape.s + pair.omega * shape.h).norm();
        if (res_l > 1e-12 * scale || res_s > 1e-12 * scale) {
            std::ostringstream os;
            os.precision(3);
            os << std::scientific << "pair blocks violate l = omega r / s = -omega h: residuals "
               << res_l << ", " << res_s << " at scale " << scale;
            throw StructureViolation(os.str());
        }
        shapes.push_back(std::move(shape));
    }
    return shapes;
}

HarmonicParams project_initial_conditions(const GramMatrix& gram,
                                          const std::vector<ModePair>& basis,
                                          const StateVector& ic) {
    const auto n_modes = static_cast<Eigen::Index>(basis.size());
    const Eigen::VectorXd stacked = ic.stacked();
    if (stacked.size() != gram.G.rows()) {
        throw DimensionMismatch("initial condition size does not match the system");
    }
    HarmonicParams params;
    params.amplitude.resize(n_modes);
    params.phase.resize(n_modes);
    for (Eigen::Index k = 0; k < n_modes; ++k) {
        const double chi = g_inner(gram, stacked, basis[k].u);
        const double psi = g_inner(gram, stacked, basis[k].v);
        const double a = std::hypot(chi, psi);
        double phi = a == 0.0 ? 0.0 : std::atan2(psi, chi);
        if (phi <= -std::numbers::pi) phi = std::numbers::pi;
        params.amplitude(k) = a;
        params.phase(k) = phi;
    }
    return params;
}

StateVector evaluate_state(const std::vector<ModeShape>& shapes,
                           const HarmonicParams& params,
                           double t) {
    if (shapes.size() != static_cast<std::size_t>(params.modes())) {
        throw DimensionMismatch("shapes and params must be index-aligned");
    }
    const Eigen::Index n = shapes.empty() ? 0 : shapes.front().h.size();
    StateVector state{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    for (std::size_t k = 0; k < shapes.size(); ++k) {
        const double a = params.amplitude(static_cast<Eigen::Index>(k));
        if (a == 0.0) continue;
        const double w = shapes[k].omega;
        const double arg = w * t + params.phase(static_cast<Eigen::Index>(k));
        const double c = std::cos(arg);
        const double s = std::sin(arg);
        state.eta += a * (c * shapes[k].h + s * shapes[k].r);
        state.etadot += a * w * (-s * shapes[k].h + c * shapes[k].r);
    }
    return state;
}

Eigen::VectorXd evaluate_acceleration(const std::vector<ModeShape>& shapes,
                                      const HarmonicParams& params,
                                      double t) {
    if (shapes.size() != static_cast<std::size_t>(params.modes())) {
        throw DimensionMismatch("shapes and params must be index-aligned");
    }
    const Eigen::Index n = shapes.empty() ? 0 : shapes.front().h.size();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < shapes.size(); ++k) {
        const double a = params.amplitude(static_cast<Eigen::Index>(k));
        if (a == 0.0) continue;
        const double w = shapes[k].omega;
        const double arg = w * t + params.phase(static_cast<Eigen::Index>(k));
        acc -= a * w * w * (std::cos(arg) * shapes[k].h + std::sin(arg) * shapes[k].r);
    }
    return acc;
}

std::vector<std::function<Eigen::VectorXd(double)>> normal_harmonics(
    const std::vector<ModeShape>& shapes, const HarmonicParams& params) {
    if (shapes.size() != static_cast<std::size_t>(params.modes())) {
        throw DimensionMismatch("shapes and params must be index-aligned");
    }
    std::vector<std::function<Eigen::VectorXd(double)>> harmonics;
    harmonics.reserve(shapes.size());
    for (std::size_t k = 0; k < shapes.size(); ++k) {
        const ModeShape shape = shapes[k];
        const double a = params.amplitude(static_cast<Eigen::Index>(k));
        const double phi = params.phase(static_cast<Eigen::Index>(k));
        harmonics.push_back([shape, a, phi](double t) -> Eigen::VectorXd {
            const double arg = shape.omega * t + phi;
            return a * (std::cos(arg) * shape.h + std::sin(arg) * shape.r);
        });
    }
    return harmonics;
}

ComplexAmplitudes complex_amplitudes(const HarmonicParams& params) {
    const Eigen::Index m = params.amplitude.size();
    ComplexAmplitudes amps;
    amps.gamma.resize(m);
    amps.delta.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double a = params.amplitude(k);
        const double phi = params.phase(k);
        amps.gamma(k) = std::complex<double>(a * std::cos(phi), -a * std::sin(phi));
        amps.delta(k) = std::conj(amps.gamma(k));
    }
    return amps;
}

double energy(const SystemMatrices& sys, const StateVector& state) {
    if (state.eta.size() != sys.n() || state.etadot.size() != sys.n()) {
        throw DimensionMismatch("state size does not match the system");
    }
    return 0.5 * state.etadot.dot(sys.A * state.etadot) + 0.5 * state.eta.dot(sys.C * state.eta);
}

}  // namespace gyromodal
