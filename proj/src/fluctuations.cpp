#include "iddm/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "iddm/errors.hpp"

namespace iddm {

namespace {

constexpr int kX1 = 0;
constexpr int kP1 = 1;
constexpr int kX2 = 2;
constexpr int kP2 = 3;

double matter_norm(const Quadratures& q) {
    return 0.5 * (q[kX2] * q[kX2] + q[kP2] * q[kP2]);
}

}  // namespace

QuadraticForm symplectic_form() {
    QuadraticForm j = QuadraticForm::Zero();
    j(kX1, kP1) = 1.0;
    j(kP1, kX1) = -1.0;
    j(kX2, kP2) = 1.0;
    j(kP2, kX2) = -1.0;
    return j;
}

double classical_energy(const ModelParams& params, ImpurityPopulation delta, const Quadratures& q) {
    if (params.chi != 0.0) throw Error(ErrorKind::ChiUnsupported, "fluctuations require chi = 0");
    const double b2 = matter_norm(q);
    if (!(b2 <= 1.0)) throw Error(ErrorKind::DomainError, "|beta|^2 must be <= 1");
    const auto f = effective_frequencies(params, delta);
    const double k = std::sqrt(1.0 - b2);
    const double a2 = 0.5 * (q[kX1] * q[kX1] + q[kP1] * q[kP1]);
    // Re(alpha) Re(beta) = x1 x2 / 2
    return f.f1 * a2 + f.f2 * b2 - 2.0 * params.lambda * k * q[kX1] * q[kX2];
}

QuadraticForm energy_hessian(const ModelParams& params, ImpurityPopulation delta,
                             const Quadratures& q) {
    if (params.chi != 0.0) throw Error(ErrorKind::ChiUnsupported, "fluctuations require chi = 0");
    const double b2 = matter_norm(q);
    if (!(b2 < 1.0)) throw Error(ErrorKind::DomainError, "|beta|^2 must be < 1");
    const auto f = effective_frequencies(params, delta);
    const double lam = params.lambda;
    const double x1 = q[kX1];
    const double x2 = q[kX2];
    const double p2 = q[kP2];

    const double k = std::sqrt(1.0 - b2);
    const double k3 = k * k * k;
    const double kx = -x2 / (2.0 * k);
    const double kp = -p2 / (2.0 * k);
    const double kxx = -1.0 / (2.0 * k) - x2 * x2 / (4.0 * k3);
    const double kpp = -1.0 / (2.0 * k) - p2 * p2 / (4.0 * k3);
    const double kxp = -x2 * p2 / (4.0 * k3);

    QuadraticForm m = QuadraticForm::Zero();
    m(kX1, kX1) = f.f1;
    m(kP1, kP1) = f.f1;
    m(kX1, kX2) = m(kX2, kX1) = -2.0 * lam * (k + x2 * kx);
    m(kX1, kP2) = m(kP2, kX1) = -2.0 * lam * x2 * kp;
    m(kX2, kX2) = f.f2 - 2.0 * lam * x1 * (2.0 * kx + x2 * kxx);
    m(kX2, kP2) = m(kP2, kX2) = -2.0 * lam * x1 * (kp + x2 * kxp);
    m(kP2, kP2) = f.f2 - 2.0 * lam * x1 * x2 * kpp;
    return m;
}

SpectrumResult symplectic_spectrum(const QuadraticForm& hessian, double tolerance) {
    const QuadraticForm sym = 0.5 * (hessian + hessian.transpose());
    Eigen::SelfAdjointEigenSolver<QuadraticForm> es(sym);
    const Eigen::Vector4d lam = es.eigenvalues();
    const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
    if (lam.minCoeff() < -tolerance * scale) return SpectrumResult{0.0, 0.0, false};

    // With S = M^(1/2), S J S is similar to J M and real antisymmetric, so
    // i S J S is Hermitian with eigenvalues (-e+, -e-, e-, e+).
    const Eigen::Vector4d root = lam.cwiseMax(0.0).cwiseSqrt();
    const QuadraticForm s = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    const QuadraticForm a = s * symplectic_form() * s;
    const Eigen::Matrix4cd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(h, Eigen::EigenvaluesOnly);
    const Eigen::Vector4d w = hs.eigenvalues();
    return SpectrumResult{std::max(0.0, w[2]), std::max(0.0, w[3]), true};
}

SpectrumResult excitation_spectrum(const ModelParams& params, ImpurityPopulation delta) {
    const auto sol = equilibrium_closed_form(params, delta);
    const Quadratures q(std::sqrt(2.0) * sol.alpha, 0.0, std::sqrt(2.0) * sol.beta, 0.0);
    const auto result = symplectic_spectrum(energy_hessian(params, delta, q));
    if (!result.stable) {
        throw Error(ErrorKind::UnstableEquilibrium,
                    "fluctuation Hessian has a negative direction at delta = " +
                        std::to_string(delta.value()) + ", lambda = " +
                        std::to_string(params.lambda));
    }
    return result;
}

}  // namespace iddm
