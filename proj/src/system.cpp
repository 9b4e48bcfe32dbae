#include "gyromodal/system.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gyromodal {

namespace {

std::string format_quantity(double value) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << value;
    return os.str();
}

void require_symmetric_pd(const Eigen::MatrixXd& X, const char* name, double tol) {
    const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
    const double dev = (X - X.transpose()).cwiseAbs().maxCoeff();
    // Negated comparison so non-finite entries fail the check too.
    if (!(dev <= tol * scale)) {
        throw NotSymmetric(std::string(name) + " deviates from symmetry by " +
                           format_quantity(dev) + " (tol " + format_quantity(tol * scale) + ")");
    }
    Eigen::MatrixXd S = 0.5 * (X + X.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double floor = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
    if (!(lmin > floor)) {
        throw NotPositiveDefinite(std::string(name) + " has minimum eigenvalue " +
                                  format_quantity(lmin) + " (floor " + format_quantity(floor) + ")");
    }
}

// Central-difference step per coordinate, scale aware.
Eigen::VectorXd coordinate_steps(const Eigen::VectorXd& q, double h) {
    return h * (Eigen::VectorXd::Ones(q.size()) + q.cwiseAbs());
}

template <typename F>
auto guarded(const F& f, const char* what) {
    return [&f, what](auto&&... args) {
        try {
            return f(std::forward<decltype(args)>(args)...);
        } catch (const Error&) {
            throw;
        } catch (const std::exception& e) {
            throw EvaluationFailure(std::string(what) + " threw: " + e.what());
        }
    };
}

}  // namespace

LagrangianModel LagrangianModel::conservative(int n,
                                              std::function<double(const Eigen::VectorXd&)> L0) {
    LagrangianModel m;
    m.n = n;
    m.L0 = std::move(L0);
    m.b = [n](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(n).eval(); };
    m.a = [n](const Eigen::VectorXd&) { return Eigen::MatrixXd::Identity(n, n).eval(); };
    m.Q = [n](const Eigen::VectorXd&, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(n).eval();
    };
    return m;
}

SystemMatrices validate_system(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& B,
                               const Eigen::MatrixXd& C,
                               double tol) {
    const Eigen::Index n = A.rows();
    if (n < 1 || A.cols() != n || B.rows() != n || B.cols() != n || C.rows() != n ||
        C.cols() != n) {
        throw DimensionMismatch("A, B, C must be square matrices of equal dimension n >= 1");
    }

    require_symmetric_pd(A, "A", tol);
    require_symmetric_pd(C, "C", tol);

    const double b_scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    const double b_dev = (B + B.transpose()).cwiseAbs().maxCoeff();
    if (!(b_dev <= tol * b_scale)) {
        throw NotAntisymmetric("B deviates from antisymmetry by " + format_quantity(b_dev) +
                               " (tol " + format_quantity(tol * b_scale) + ")");
    }

    SystemMatrices sys;
    sys.A = 0.5 * (A + A.transpose());
    sys.B = 0.5 * (B - B.transpose());
    sys.C = 0.5 * (C + C.transpose());
    return sys;
}

bool check_equilibrium(const LagrangianModel& model,
                       const EquilibriumPoint& q_star,
                       double h,
                       double tol) {
    if (!model.L0) throw EvaluationFailure("model.L0 is not set");
    if (q_star.q_star.size() != model.n) {
        throw DimensionMismatch("q_star dimension does not match model.n");
    }
    const auto L0 = guarded(model.L0, "L0");
    const Eigen::VectorXd q0 = q_star.q_star;
    const Eigen::VectorXd steps = coordinate_steps(q0, h);
    const int n = model.n;

    Eigen::VectorXd grad(n);
    for (int r = 0; r < n; ++r) {
        Eigen::VectorXd qp = q0, qm = q0;
        qp(r) += steps(r);
        qm(r) -= steps(r);
        grad(r) = (L0(qp) - L0(qm)) / (2.0 * steps(r));
    }
    if (grad.norm() >= tol) return false;

    Eigen::MatrixXd hess(n, n);
    const double f0 = L0(q0);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd qp = q0, qm = q0;
        qp(k) += steps(k);
        qm(k) -= steps(k);
        hess(k, k) = (L0(qp) - 2.0 * f0 + L0(qm)) / (steps(k) * steps(k));
        for (int r = k + 1; r < n; ++r) {
            Eigen::VectorXd qpp = q0, qpm = q0, qmp = q0, qmm = q0;
            qpp(k) += steps(k); qpp(r) += steps(r);
            qpm(k) += steps(k); qpm(r) -= steps(r);
            qmp(k) -= steps(k); qmp(r) += steps(r);
            qmm(k) -= steps(k); qmm(r) -= steps(r);
            const double mixed =
                (L0(qpp) - L0(qpm) - L0(qmp) + L0(qmm)) / (4.0 * steps(k) * steps(r));
            hess(k, r) = mixed;
            hess(r, k) = mixed;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hess, Eigen::EigenvaluesOnly);
    const double floor = 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff();
    return es.eigenvalues().maxCoeff() < -floor;
}

SystemMatrices linearize_at_equilibrium(const LagrangianModel& model,
                                        const EquilibriumPoint& q_star,
                                        double h,
                                        double tol) {
    if (!model.L0 || !model.b || !model.a || !model.Q) {
        throw EvaluationFailure("model callables must all be set");
    }
    if (!check_equilibrium(model, q_star, h, tol)) {
        throw NotAnEquilibrium("q_star is not a strict local maximum of L0");
    }

    const auto L0 = guarded(model.L0, "L0");
    const auto bfun = guarded(model.b, "b");
    const auto afun = guarded(model.a, "a");
    const auto Qfun = guarded(model.Q, "Q");

    const Eigen::VectorXd q0 = q_star.q_star;
    const Eigen::VectorXd steps = coordinate_steps(q0, h);
    const int n = model.n;

    const Eigen::MatrixXd A = afun(q0);

    // C_kr = -d2 L0 / dq^k dq^r, assembled symmetric by construction.
    Eigen::MatrixXd C(n, n);
    const double f0 = L0(q0);
    for (int k = 0; k < n; ++k) {
        Eigen::VectorXd qp = q0, qm = q0;
        qp(k) += steps(k);
        qm(k) -= steps(k);
        C(k, k) = -(L0(qp) - 2.0 * f0 + L0(qm)) / (steps(k) * steps(k));
        for (int r = k + 1; r < n; ++r) {
            Eigen::VectorXd qpp = q0, qpm = q0, qmp = q0, qmm = q0;
            qpp(k) += steps(k); qpp(r) += steps(r);
            qpm(k) += steps(k); qpm(r) -= steps(r);
            qmp(k) -= steps(k); qmp(r) += steps(r);
            qmm(k) -= steps(k); qmm(r) -= steps(r);
            const double mixed =
                -(L0(qpp) - L0(qpm) - L0(qmp) + L0(qmm)) / (4.0 * steps(k) * steps(r));
            C(k, r) = mixed;
            C(r, k) = mixed;
        }
    }

    // Jb(k, r) = db_k / dq^r at q*.
    Eigen::MatrixXd Jb(n, n);
    for (int r = 0; r < n; ++r) {
        Eigen::VectorXd qp = q0, qm = q0;
        qp(r) += steps(r);
        qm(r) -= steps(r);
        Jb.col(r) = (bfun(qp) - bfun(qm)) / (2.0 * steps(r));
    }

    // JQ(k, r) = dQ_k / dqdot^r at (q*, 0); velocity steps are not scaled
    // by |q*| since the probe point has zero velocity.
    Eigen::MatrixXd JQ(n, n);
    const Eigen::VectorXd v0 = Eigen::VectorXd::Zero(n);
    double worst_power = 0.0;
    for (int r = 0; r < n; ++r) {
        Eigen::VectorXd vp = v0, vm = v0;
        vp(r) += h;
        vm(r) -= h;
        const Eigen::VectorXd Qp = Qfun(q0, vp);
        const Eigen::VectorXd Qm = Qfun(q0, vm);
        JQ.col(r) = (Qp - Qm) / (2.0 * h);
        worst_power = std::max(worst_power, std::abs(Qp.dot(vp)));
        worst_power = std::max(worst_power, std::abs(Qm.dot(vm)));
    }
    const double jq_scale = std::max(1.0, JQ.cwiseAbs().maxCoeff());
    const double jq_dev = (JQ + JQ.transpose()).cwiseAbs().maxCoeff();
    if (!(jq_dev <= tol * jq_scale)) {
        throw ForceNotGyroscopic("velocity Jacobian of Q deviates from antisymmetry by " +
                                 format_quantity(jq_dev));
    }
    if (!(worst_power <= tol * std::max(1.0, h * jq_scale))) {
        throw ForceNotGyroscopic("Q does work along probe velocities: |Q . qdot| = " +
                                 format_quantity(worst_power));
    }

    const Eigen::MatrixXd B = (Jb - Jb.transpose()) - JQ;
    return validate_system(A, B, C, tol);
}

}  // namespace gyromodal
